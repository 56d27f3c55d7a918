"""
Bipartite coprimality graphs and maximum matching.

This module implements:
- BipartiteGraph over two progressions with adjacency rows stored as int bitsets
- Hopcroft-Karp maximum matching (lowest-index augmenting paths first)
- Koenig's construction of a minimum vertex cover from a maximum matching
- the largest edge-free pair (S, T) with both sides nonempty
- verify_proposition: whenever |S| + |T| >= m some s in S, t in T are 2-coprime

Edges are decided from prime-factor sets taken from the shared sieve: a row is
the full right mask minus the union of the right elements sharing a prime
with the left element.
"""

from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum
from math import gcd
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple
import logging
import sys

from coprimatch.errors import CapacityError, DomainError, InconsistencyError
from coprimatch.intervals import Progression
from coprimatch.number_theory import FactorSieve, shared_sieve, two_coprime


logger = logging.getLogger(__name__)

_INF = sys.maxsize


class Relation(Enum):
    """Which pairs are joined by an edge."""
    COPRIME = "coprime"  # gcd = 1
    TWO_COPRIME = "two_coprime"  # gcd is a power of 2

    def holds(self, a: int, b: int) -> bool:
        """Direct gcd evaluation, independent of the sieve."""
        if self is Relation.COPRIME:
            return gcd(a, b) == 1
        return two_coprime(a, b)


def _bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _mask_of(indices: Sequence[int]) -> int:
    mask = 0
    for index in indices:
        mask |= 1 << index
    return mask


@dataclass(frozen=True)
class BipartiteGraph:
    """Left/right progressions with one bitset row per left vertex."""
    left: Progression
    right: Progression
    relation: Relation
    adjacency: Tuple[int, ...]
    columns: Tuple[int, ...]

    @property
    def n_left(self) -> int:
        return len(self.left)

    @property
    def n_right(self) -> int:
        return len(self.right)

    @property
    def left_values(self) -> List[int]:
        return self.left.elements()

    @property
    def right_values(self) -> List[int]:
        return self.right.elements()

    @property
    def full_left(self) -> int:
        return (1 << self.n_left) - 1

    @property
    def full_right(self) -> int:
        return (1 << self.n_right) - 1

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i] >> j & 1)

    def neighbors(self, i: int) -> List[int]:
        return list(_bits(self.adjacency[i]))

    def edge_count(self) -> int:
        return sum(_popcount(row) for row in self.adjacency)

    def non_edges(self) -> Iterator[Tuple[int, int]]:
        for i, row in enumerate(self.adjacency):
            for j in _bits(self.full_right & ~row):
                yield i, j


def build_graph(
    left: Progression,
    right: Progression,
    relation: Relation = Relation.COPRIME,
    sieve: Optional[FactorSieve] = None,
) -> BipartiteGraph:
    """Coprimality graph between the elements of two progressions."""
    top = max([p.max_in() for p in (left, right) if len(p)] or [1])
    sieve = sieve if sieve is not None else shared_sieve(top)
    if top > sieve.limit:
        raise CapacityError(f"elements up to {top} exceed the sieve limit {sieve.limit}")

    if relation is Relation.COPRIME:
        factors = sieve.prime_factors
    else:
        factors = sieve.odd_prime_factors

    by_prime: Dict[int, int] = {}
    for j, value in enumerate(right):
        for p in factors(value):
            by_prime[p] = by_prime.get(p, 0) | (1 << j)

    full = (1 << len(right)) - 1
    rows: List[int] = []
    for value in left:
        blocked = 0
        for p in factors(value):
            blocked |= by_prime.get(p, 0)
        rows.append(full & ~blocked)

    columns = [0] * len(right)
    for i, row in enumerate(rows):
        for j in _bits(row):
            columns[j] |= 1 << i

    return BipartiteGraph(left, right, relation, tuple(rows), tuple(columns))


@dataclass
class MatchingResult:
    """A matching given by index pairs, optionally with a Hall witness (S, T)."""
    left_values: List[int]
    right_values: List[int]
    pairs: List[Tuple[int, int]]
    size: int
    witness: Optional[Tuple[List[int], List[int]]] = None

    @property
    def is_perfect(self) -> bool:
        return self.size == len(self.left_values) == len(self.right_values)

    def value_pairs(self) -> List[Tuple[int, int]]:
        return [(self.left_values[i], self.right_values[j]) for i, j in self.pairs]

    def to_dict(self) -> Dict:
        """Convert to dictionary."""
        witness = None
        if self.witness is not None:
            witness = {"S": list(self.witness[0]), "T": list(self.witness[1])}
        return {
            "left": list(self.left_values),
            "right": list(self.right_values),
            "pairs": [[i, j] for i, j in self.pairs],
            "witness": witness,
        }


def _layer(rows: Sequence[int], match_l: List[int], match_r: List[int], dist: List[int]) -> int:
    """BFS layering from the free left vertices; returns the free-right layer or _INF."""
    queue: deque = deque()
    for u, partner in enumerate(match_l):
        if partner == -1:
            dist[u] = 0
            queue.append(u)
        else:
            dist[u] = _INF
    free_layer = _INF
    while queue:
        u = queue.popleft()
        if dist[u] >= free_layer:
            continue
        for v in _bits(rows[u]):
            w = match_r[v]
            if w == -1:
                free_layer = min(free_layer, dist[u] + 1)
            elif dist[w] == _INF:
                dist[w] = dist[u] + 1
                queue.append(w)
    return free_layer


def _augment(
    root: int,
    rows: Sequence[int],
    match_l: List[int],
    match_r: List[int],
    dist: List[int],
    free_layer: int,
) -> bool:
    """Iterative layered DFS for one augmenting path starting at ``root``."""
    stack_u = [root]
    stack_it = [_bits(rows[root])]
    chosen: List[int] = []
    while stack_u:
        u = stack_u[-1]
        descended = False
        for v in stack_it[-1]:
            w = match_r[v]
            if w == -1:
                if dist[u] + 1 != free_layer:
                    continue
                chosen.append(v)
                for uu, vv in zip(stack_u, chosen):
                    match_l[uu] = vv
                    match_r[vv] = uu
                return True
            if dist[w] == dist[u] + 1:
                chosen.append(v)
                stack_u.append(w)
                stack_it.append(_bits(rows[w]))
                descended = True
                break
        if not descended:
            dist[u] = _INF
            stack_u.pop()
            stack_it.pop()
            if chosen:
                chosen.pop()
    return False


def _hopcroft_karp(rows: Sequence[int], n_right: int) -> Tuple[List[int], List[int]]:
    """Maximum matching of compact left rows against right bit positions < n_right."""
    match_l = [-1] * len(rows)
    match_r = [-1] * n_right
    dist = [_INF] * len(rows)
    while True:
        free_layer = _layer(rows, match_l, match_r, dist)
        if free_layer == _INF:
            break
        for u in range(len(rows)):
            if match_l[u] == -1:
                _augment(u, rows, match_l, match_r, dist, free_layer)
    return match_l, match_r


def _alternating_reach(
    rows: Sequence[int], match_l: List[int], match_r: List[int]
) -> Tuple[int, int]:
    """Vertices reachable from free left vertices by alternating paths (left mask, right mask)."""
    reach_l = 0
    reach_r = 0
    queue: deque = deque()
    for u, partner in enumerate(match_l):
        if partner == -1:
            reach_l |= 1 << u
            queue.append(u)
    while queue:
        u = queue.popleft()
        for v in _bits(rows[u] & ~reach_r):
            reach_r |= 1 << v
            w = match_r[v]
            if w != -1 and not reach_l >> w & 1:
                reach_l |= 1 << w
                queue.append(w)
    return reach_l, reach_r


def max_matching(graph: BipartiteGraph) -> MatchingResult:
    """Maximum-cardinality matching (Hopcroft-Karp)."""
    match_l, _ = _hopcroft_karp(graph.adjacency, graph.n_right)
    pairs = [(i, j) for i, j in enumerate(match_l) if j != -1]
    logger.debug(f"Matching {graph.left}x{graph.right} ({graph.relation.value}): {len(pairs)}")
    return MatchingResult(graph.left_values, graph.right_values, pairs, len(pairs))


def _match_arrays(graph: BipartiteGraph, matching: MatchingResult) -> Tuple[List[int], List[int]]:
    match_l = [-1] * graph.n_left
    match_r = [-1] * graph.n_right
    for i, j in matching.pairs:
        if match_l[i] != -1 or match_r[j] != -1:
            raise InconsistencyError(f"pair ({i}, {j}) reuses a vertex")
        if not graph.has_edge(i, j):
            raise InconsistencyError(f"pair ({i}, {j}) is not an edge")
        match_l[i] = j
        match_r[j] = i
    return match_l, match_r


def min_vertex_cover(graph: BipartiteGraph, matching: MatchingResult) -> Tuple[List[int], List[int]]:
    """
    Koenig cover (left indices, right indices) from a maximum matching.

    Raises InconsistencyError when ``matching`` is not maximum.
    """
    match_l, match_r = _match_arrays(graph, matching)
    reach_l, reach_r = _alternating_reach(graph.adjacency, match_l, match_r)
    cover_left = list(_bits(graph.full_left & ~reach_l))
    cover_right = list(_bits(reach_r))
    if len(cover_left) + len(cover_right) != matching.size:
        raise InconsistencyError(
            f"matching of size {matching.size} is not maximum "
            f"(alternating cover has size {len(cover_left) + len(cover_right)})"
        )
    cover_left_mask = _mask_of(cover_left)
    cover_right_mask = _mask_of(cover_right)
    for i, row in enumerate(graph.adjacency):
        if not cover_left_mask >> i & 1 and row & ~cover_right_mask:
            raise InconsistencyError(f"cover misses an edge at left vertex {i}")
    return cover_left, cover_right


@dataclass
class CrossIndependent:
    """Largest |S| + |T| over nonempty edge-free pairs; S and T are None when value is 0."""
    value: int
    S: Optional[List[int]] = None
    T: Optional[List[int]] = None


def _induced_independent(
    graph: BipartiteGraph, left_mask: int, right_mask: int
) -> Tuple[int, List[int], List[int]]:
    """Maximum independent set of G[left_mask, right_mask] via Koenig."""
    left_list = list(_bits(left_mask))
    rows = [graph.adjacency[i] & right_mask for i in left_list]
    match_l, match_r = _hopcroft_karp(rows, graph.n_right)
    reach_l, reach_r = _alternating_reach(rows, match_l, match_r)
    S = [left_list[k] for k in _bits(reach_l)]
    T = list(_bits(right_mask & ~reach_r))
    return len(S) + len(T), S, T


def _induced_value(graph: BipartiteGraph, left_mask: int, right_mask: int) -> int:
    rows = [graph.adjacency[i] & right_mask for i in _bits(left_mask)]
    match_l, _ = _hopcroft_karp(rows, graph.n_right)
    matched = sum(1 for j in match_l if j != -1)
    return _popcount(left_mask) + _popcount(right_mask) - matched


def max_cross_independent(graph: BipartiteGraph) -> CrossIndependent:
    """
    Largest |S| + |T| with S, T nonempty and no edge between them.

    Pre-pass: Koenig on the whole graph. If its independent set meets both
    sides it is optimal. Otherwise every non-edge (s, t) is tried with
    S inside the non-neighbours of t and T inside the non-neighbours of s.
    """
    if graph.n_left == 0 or graph.n_right == 0:
        return CrossIndependent(0)

    match_l, match_r = _hopcroft_karp(graph.adjacency, graph.n_right)
    matched = sum(1 for j in match_l if j != -1)
    upper_bound = graph.n_left + graph.n_right - matched
    reach_l, reach_r = _alternating_reach(graph.adjacency, match_l, match_r)
    S_mask = reach_l
    T_mask = graph.full_right & ~reach_r
    if S_mask and T_mask:
        return CrossIndependent(upper_bound, list(_bits(S_mask)), list(_bits(T_mask)))

    best = 0
    best_key: Optional[Tuple[int, int]] = None
    seen: Set[Tuple[int, int]] = set()
    for s in range(graph.n_left):
        right_free = graph.full_right & ~graph.adjacency[s]
        for t in _bits(right_free):
            left_free = graph.full_left & ~graph.columns[t]
            key = (left_free, right_free)
            if key in seen or _popcount(left_free) + _popcount(right_free) <= best:
                continue
            seen.add(key)
            value = _induced_value(graph, left_free, right_free)
            if value > best:
                best, best_key = value, key
        if best == upper_bound:
            break

    if best_key is None:
        return CrossIndependent(0)
    value, S, T = _induced_independent(graph, *best_key)
    if value != best or not S or not T:
        raise InconsistencyError("edge-free pair lost a side during extraction")
    return CrossIndependent(value, S, T)


def validate_witness(graph: BipartiteGraph, S: Sequence[int], T: Sequence[int]) -> bool:
    """Nonempty index sets with no related pair, checked by direct gcd."""
    if not S or not T:
        return False
    left_values = graph.left_values
    right_values = graph.right_values
    return not any(
        graph.relation.holds(left_values[i], right_values[j]) for i in S for j in T
    )


def hall_witness(graph: BipartiteGraph, matching: MatchingResult) -> MatchingResult:
    """
    Attach a Hall witness to a maximum matching that is not perfect.

    An isolated vertex yields the singleton-side witness (the whole other side
    against that vertex); otherwise S = free-reachable left vertices and
    T = right vertices outside their neighbourhood.
    """
    if matching.is_perfect:
        return matching
    witness: Optional[Tuple[List[int], List[int]]] = None
    if graph.n_left and graph.n_right:
        for j, column in enumerate(graph.columns):
            if column == 0:
                witness = (list(range(graph.n_left)), [j])
                break
        if witness is None:
            for i, row in enumerate(graph.adjacency):
                if row == 0:
                    witness = ([i], list(range(graph.n_right)))
                    break
        if witness is None:
            match_l, match_r = _match_arrays(graph, matching)
            reach_l, reach_r = _alternating_reach(graph.adjacency, match_l, match_r)
            S = list(_bits(reach_l))
            T = list(_bits(graph.full_right & ~reach_r))
            # one side is empty only for unequal sides with the left one saturated
            witness = (S, T) if S and T else None
    if witness is not None and not validate_witness(graph, *witness):
        raise InconsistencyError("Hall witness failed gcd re-validation")
    return replace(matching, witness=witness)


@dataclass
class PropositionVerdict:
    """Outcome of checking the 2-coprime pair property for one (I, J)."""
    left: Progression
    right: Progression
    m: int
    holds: bool
    max_cross_value: int
    witness_left: List[int] = field(default_factory=list)
    witness_right: List[int] = field(default_factory=list)

    def to_dict(self) -> Dict:
        """Convert to dictionary."""
        witness = None
        if not self.holds:
            witness = {"S": self.witness_left, "T": self.witness_right}
        return {
            "interval_left": str(self.left),
            "interval_right": str(self.right),
            "left": self.left.elements(),
            "right": self.right.elements(),
            "m": self.m,
            "holds": self.holds,
            "max_cross_value": self.max_cross_value,
            "witness": witness,
        }


def verify_proposition(
    left: Progression, right: Progression, sieve: Optional[FactorSieve] = None
) -> PropositionVerdict:
    """
    Whenever nonempty S in I, T in J have |S| + |T| >= m, some pair is 2-coprime.

    Holds iff the largest nonempty edge-free pair of the 2-coprime graph has
    size <= m - 1; otherwise that pair (as element values) is the witness.
    """
    if len(left) != len(right):
        raise DomainError(f"progressions must have equal length, got {len(left)} and {len(right)}")
    m = len(left)
    graph = build_graph(left, right, Relation.TWO_COPRIME, sieve)
    cross = max_cross_independent(graph)
    holds = cross.value <= m - 1
    verdict = PropositionVerdict(left, right, m, holds, cross.value)
    if not holds:
        left_values = graph.left_values
        right_values = graph.right_values
        verdict.witness_left = [left_values[i] for i in cross.S or []]
        verdict.witness_right = [right_values[j] for j in cross.T or []]
        if not validate_witness(graph, cross.S or [], cross.T or []):
            raise InconsistencyError("proposition witness failed gcd re-validation")
    return verdict
