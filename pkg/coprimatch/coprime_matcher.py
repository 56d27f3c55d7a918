"""
Coprime matchings of intervals.

Pipeline for intervals I, J of equal length:
1. Parity split: match the evens of I with the odds of J and the odds of I
   with the evens of J in the 2-coprime graph. Opposite parity turns
   2-coprime into coprime, so two perfect block matchings give a coprime
   bijection.
2. Fallback: maximum matching on the full coprime graph.
3. Otherwise a failure certificate: a Hall witness on the full coprime graph,
   which rules out every coprime bijection.

near_coprime_match gives the bijection with the fewest non-coprime pairs,
for the odd-length cases where no coprime matching is guaranteed.
"""

from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Dict, List, Optional, Tuple, Union
import logging

from coprimatch.errors import DomainError, InconsistencyError
from coprimatch.intervals import Progression
from coprimatch.matching import (
    BipartiteGraph,
    MatchingResult,
    Relation,
    build_graph,
    hall_witness,
    max_matching,
)
from coprimatch.number_theory import FactorSieve


logger = logging.getLogger(__name__)


class MatchMethod(Enum):
    """How a bijection was found."""
    PARITY_SPLIT = "parity_split"
    DIRECT = "direct"
    MINIMUM_DEFECT = "minimum_defect"


@dataclass
class CoprimeMatching:
    """A bijection between the elements of I and J, as value pairs sorted by the I side."""
    left: Progression
    right: Progression
    pairs: List[Tuple[int, int]]
    method: MatchMethod
    defect: int = 0
    non_coprime: List[Tuple[int, int, int]] = field(default_factory=list)  # (i, j, gcd)

    @property
    def is_coprime(self) -> bool:
        return self.defect == 0

    def validate(self) -> bool:
        """Bijection between the two element sets with the recorded defect."""
        lefts = sorted(a for a, _ in self.pairs)
        rights = sorted(b for _, b in self.pairs)
        if lefts != self.left.elements() or rights != self.right.elements():
            return False
        bad = [(a, b, gcd(a, b)) for a, b in self.pairs if gcd(a, b) > 1]
        return len(bad) == self.defect and bad == self.non_coprime

    def to_dict(self) -> Dict:
        """Convert to dictionary."""
        return {
            "interval_left": str(self.left),
            "interval_right": str(self.right),
            "left": self.left.elements(),
            "right": self.right.elements(),
            "method": self.method.value,
            "defect": self.defect,
            "pairs": [[self.left.index_of(a), self.right.index_of(b)] for a, b in self.pairs],
            "value_pairs": [[a, b] for a, b in self.pairs],
            "non_coprime": [{"pair": [a, b], "gcd": g} for a, b, g in self.non_coprime],
            "witness": None,
        }


@dataclass
class FailureCertificate:
    """Proof that no coprime bijection exists: nonempty S in I, T in J, pairwise non-coprime."""
    left: Progression
    right: Progression
    S: List[int]
    T: List[int]
    max_coprime_pairs: int
    blockers: List[str] = field(default_factory=list)

    @property
    def excess(self) -> int:
        """|S| + |T| - m; positive for a Hall violation."""
        return len(self.S) + len(self.T) - len(self.left)

    def validate(self) -> bool:
        """Re-check by direct gcd; needs |S| + |T| > m so Hall's condition fails."""
        if not self.S or not self.T or self.excess <= 0:
            return False
        if not set(self.S) <= set(self.left.elements()):
            return False
        if not set(self.T) <= set(self.right.elements()):
            return False
        return all(gcd(s, t) > 1 for s in self.S for t in self.T)

    def to_dict(self) -> Dict:
        """Convert to dictionary."""
        return {
            "interval_left": str(self.left),
            "interval_right": str(self.right),
            "left": self.left.elements(),
            "right": self.right.elements(),
            "method": None,
            "defect": None,
            "pairs": None,
            "max_coprime_pairs": self.max_coprime_pairs,
            "blockers": list(self.blockers),
            "witness": {"S": list(self.S), "T": list(self.T)},
        }


MatchOutcome = Union[CoprimeMatching, FailureCertificate]


def _divides_product(values: List[int], target_side: Progression) -> bool:
    """Whether some element of target_side is a multiple of the product of values."""
    top = target_side.max_in()
    product = 1
    for value in values:
        product *= value
        if product > top:
            return False
    return any(t % product == 0 for t in target_side)


def detect_blockers(left: Progression, right: Progression) -> List[str]:
    """
    Elementary obstructions to a coprime matching.

    "product": 1 is not in one interval and the other contains a multiple of
    its product. "majority_even": both contain a strict majority of evens.
    """
    blockers: List[str] = []
    if len(left) == 0 or len(right) == 0:
        return blockers
    if (1 not in left and _divides_product(left.elements(), right)) or (
        1 not in right and _divides_product(right.elements(), left)
    ):
        blockers.append("product")

    def evens(p: Progression) -> int:
        return sum(1 for v in p if v % 2 == 0)

    if 2 * evens(left) > len(left) and 2 * evens(right) > len(right):
        blockers.append("majority_even")
    return blockers


def _with_defect(
    left: Progression, right: Progression, pairs: List[Tuple[int, int]], method: MatchMethod
) -> CoprimeMatching:
    pairs = sorted(pairs)
    bad = [(a, b, gcd(a, b)) for a, b in pairs if gcd(a, b) > 1]
    return CoprimeMatching(left, right, pairs, method, len(bad), bad)


def _block_pairs(
    left: Progression, right: Progression, sieve: Optional[FactorSieve]
) -> Optional[List[Tuple[int, int]]]:
    """Perfect 2-coprime matching of two single-parity blocks, or None."""
    if len(left) == 0:
        return []
    graph = build_graph(left, right, Relation.TWO_COPRIME, sieve)
    result = max_matching(graph)
    if not result.is_perfect:
        return None
    pairs = result.value_pairs()
    for a, b in pairs:
        if gcd(a, b) != 1:
            raise InconsistencyError(f"opposite-parity 2-coprime pair ({a}, {b}) is not coprime")
    return pairs


def _direct(
    left: Progression, right: Progression, sieve: Optional[FactorSieve]
) -> Tuple[BipartiteGraph, MatchingResult]:
    graph = build_graph(left, right, Relation.COPRIME, sieve)
    return graph, max_matching(graph)


def _certificate(
    left: Progression, right: Progression, graph: BipartiteGraph, result: MatchingResult
) -> FailureCertificate:
    witnessed = hall_witness(graph, result)
    if witnessed.witness is None:
        raise InconsistencyError(f"no Hall witness for imperfect matching of {left} and {right}")
    S_idx, T_idx = witnessed.witness
    left_values = graph.left_values
    right_values = graph.right_values
    certificate = FailureCertificate(
        left=left,
        right=right,
        S=[left_values[i] for i in S_idx],
        T=[right_values[j] for j in T_idx],
        max_coprime_pairs=result.size,
        blockers=detect_blockers(left, right),
    )
    if not certificate.validate():
        raise InconsistencyError(f"failure certificate for {left} and {right} did not re-validate")
    logger.info(f"No coprime matching of {left} and {right}: |S|={len(certificate.S)}, |T|={len(certificate.T)}")
    return certificate


def parity_split_match(
    left: Progression, right: Progression, sieve: Optional[FactorSieve] = None
) -> Optional[CoprimeMatching]:
    """
    Evens of I against odds of J and odds of I against evens of J, both in the
    2-coprime graph. None when the block sizes differ or a block is imperfect.
    """
    left_evens, left_odds = left.parity_split()
    right_evens, right_odds = right.parity_split()
    if len(left_evens) != len(right_odds) or len(left_odds) != len(right_evens):
        return None
    evens_block = _block_pairs(left_evens, right_odds, sieve)
    if evens_block is None:
        return None
    odds_block = _block_pairs(left_odds, right_evens, sieve)
    if odds_block is None:
        return None
    return _with_defect(left, right, evens_block + odds_block, MatchMethod.PARITY_SPLIT)


def _parity_pipeline(
    left: Progression, right: Progression, sieve: Optional[FactorSieve]
) -> MatchOutcome:
    matching = parity_split_match(left, right, sieve)
    if matching is not None:
        return matching
    logger.debug(f"Parity blocks of {left} and {right} are not both perfect; trying direct")

    graph, result = _direct(left, right, sieve)
    if result.is_perfect:
        return _with_defect(left, right, result.value_pairs(), MatchMethod.DIRECT)
    return _certificate(left, right, graph, result)


def _check_step_one(left: Progression, right: Progression) -> None:
    if left.step != 1 or right.step != 1:
        raise DomainError("coprime matching of intervals needs step-1 progressions")
    if len(left) != len(right):
        raise DomainError(f"intervals must have equal length, got {len(left)} and {len(right)}")


def match_even_length(
    left: Progression, right: Progression, sieve: Optional[FactorSieve] = None
) -> MatchOutcome:
    """Coprime matching of two intervals of equal even length, or a failure certificate."""
    _check_step_one(left, right)
    if len(left) % 2:
        raise DomainError(f"match_even_length needs even length, got {len(left)}")
    return _parity_pipeline(left, right, sieve)


def match_odd_opposite(
    left: Progression, right: Progression, sieve: Optional[FactorSieve] = None
) -> MatchOutcome:
    """Odd length with least elements of opposite parity; same pipeline on the cross blocks."""
    _check_step_one(left, right)
    if len(left) % 2 == 0:
        raise DomainError(f"match_odd_opposite needs odd length, got {len(left)}")
    if left.start % 2 == right.start % 2:
        raise DomainError(
            "least elements have the same parity; use near_coprime_match for this case"
        )
    return _parity_pipeline(left, right, sieve)


def near_coprime_match(
    left: Progression, right: Progression, sieve: Optional[FactorSieve] = None
) -> CoprimeMatching:
    """
    Bijection with the fewest non-coprime pairs.

    A maximum coprime matching is completed by pairing the leftovers in
    ascending order. No leftover pair is coprime (it would extend the
    matching), so the defect is length minus the maximum matching size.
    """
    if len(left) != len(right):
        raise DomainError(f"intervals must have equal length, got {len(left)} and {len(right)}")
    graph, result = _direct(left, right, sieve)
    pairs = result.value_pairs()
    used_left = {i for i, _ in result.pairs}
    used_right = {j for _, j in result.pairs}
    left_values = graph.left_values
    right_values = graph.right_values
    spare_left = [left_values[i] for i in range(graph.n_left) if i not in used_left]
    spare_right = [right_values[j] for j in range(graph.n_right) if j not in used_right]
    pairs.extend(zip(spare_left, spare_right))
    matching = _with_defect(left, right, pairs, MatchMethod.MINIMUM_DEFECT)
    if matching.defect != len(left) - result.size:
        raise InconsistencyError("leftover pairing produced a coprime pair")
    if matching.defect == 0:
        matching.method = MatchMethod.DIRECT
    return matching


def find_coprime_matching(
    left: Progression,
    right: Progression,
    allow_defect: bool = False,
    sieve: Optional[FactorSieve] = None,
) -> MatchOutcome:
    """
    Route a pair of equal-length progressions to the right construction.

    Even length, or odd length with opposite start parity, goes through the
    parity split; everything else is matched directly. With ``allow_defect``
    a failure is replaced by the minimum-defect bijection.
    """
    if len(left) != len(right):
        raise DomainError(f"progressions must have equal length, got {len(left)} and {len(right)}")
    if left.step == 1 and right.step == 1 and (
        len(left) % 2 == 0 or left.start % 2 != right.start % 2
    ):
        outcome = _parity_pipeline(left, right, sieve)
    else:
        graph, result = _direct(left, right, sieve)
        if result.is_perfect:
            outcome = _with_defect(left, right, result.value_pairs(), MatchMethod.DIRECT)
        else:
            outcome = _certificate(left, right, graph, result)
    if isinstance(outcome, FailureCertificate) and allow_defect:
        return near_coprime_match(left, right, sieve)
    return outcome
