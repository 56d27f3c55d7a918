"""
Exact checks of the quantitative steps behind the Hall-type condition.

Each check returns a LemmaReport. Two kinds of verdict are produced:
- proven steps (inclusion-exclusion bound, Markov consistency, proof-line
  sums, the zeta partial product) are hard verdicts, evaluated exactly or
  with the transcendental side rounded against the verdict
- asymptotic statements ("for m sufficiently large") are reported with the
  computed constants, never asserted
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union
import heapq
import logging
import math

import numpy as np

from coprimatch.errors import DomainError, InconsistencyError
from coprimatch.intervals import Progression
from coprimatch.number_theory import (
    FactorSieve,
    format_number,
    log_lower,
    lower,
    resolve_sieve,
    squarefree_divisors,
    two_coprime,
    upper,
)


logger = logging.getLogger(__name__)

Number = Union[int, float, Fraction]

LEMMAS = (
    "smlarge", "slogm", "phi", "tail", "zeta", "incl-excl", "iwaniec", "final", "single-prime", "jbound", "partners",
)

# relative slack for float sums of many positive terms
_REL_SLACK = 1e-12

TOP_K = 5


def _down(value: float) -> float:
    """Round a sum of positive terms down; the empty sum stays exactly 0."""
    if value == 0.0:
        return 0.0
    return lower(value - abs(value) * _REL_SLACK)


def _up(value: float) -> float:
    if value == 0.0:
        return 0.0
    return upper(value + abs(value) * _REL_SLACK)


@dataclass
class LemmaReport:
    """Outcome of one check: lhs against rhs, with the elements that contribute most."""
    lemma: str
    m: int
    lhs: Number
    rhs: Number
    verdict: bool
    interval: Optional[Progression] = None
    proven: bool = True  # False: the verdict is an empirical observation only
    extremal: List[int] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        """Convert to dictionary."""
        return {
            "lemma": self.lemma,
            "interval": str(self.interval) if self.interval is not None else None,
            "m": self.m,
            "lhs": format_number(self.lhs),
            "rhs": format_number(self.rhs),
            "verdict": self.verdict,
            "proven": self.proven,
            "extremal": list(self.extremal),
            "details": {k: format_number(v) for k, v in self.details.items()},
        }


def _require_length(interval: Progression, m: int) -> None:
    if m < 1:
        raise DomainError(f"m must be positive, got {m}")
    if len(interval) != m:
        raise DomainError(f"interval {interval} has {len(interval)} elements, expected m = {m}")


def _top(scores: Sequence[Tuple[Number, int]], k: int = TOP_K) -> List[int]:
    """Elements with the largest positive scores, ties to the smaller element."""
    best = heapq.nsmallest(k, ((-score, i) for score, i in scores if score > 0))
    return [i for _, i in best]


def _multiples_in(progression: Progression, d: int) -> int:
    if len(progression) == 0:
        return 0
    if progression.step == 1:
        return progression.max_in() // d - (progression.start - 1) // d
    return sum(1 for j in progression if j % d == 0)


def _prime_counts(interval: Progression, sieve: FactorSieve, bound: float) -> Dict[int, int]:
    """#{i in I : p | i} for odd primes p <= bound dividing some element."""
    counts: Dict[int, int] = {}
    for i in interval:
        for p in sieve.odd_prime_factors(i):
            if p <= bound:
                counts[p] = counts.get(p, 0) + 1
    return counts


def smlarge_count(
    interval: Progression,
    m: int,
    threshold_exponent: float = 4,
    sieve: Optional[FactorSieve] = None,
) -> Tuple[int, LemmaReport]:
    """
    Count i in I with i_m > exp((log m)^threshold_exponent).

    The Chebyshev-sum step  sum log i_m <= sum_p log p (m/p + 1) <= 2m sum_{p<=m} log p / p
    is checked with the sum enclosed by directed rounding.
    """
    _require_length(interval, m)
    sieve = resolve_sieve(sieve, interval.max_in())
    threshold_log = math.log(m) ** threshold_exponent

    count = 0
    scores: List[Tuple[Number, int]] = []
    for i in interval:
        i_m = sieve.odd_squarefree_part(i, m)
        if math.log(i_m) > threshold_log:
            count += 1
        scores.append((i_m, i))

    counts = _prime_counts(interval, sieve, m)
    terms = [c * math.log(p) for p, c in sorted(counts.items())]
    lhs_low, lhs_high = _down(math.fsum(terms)), _up(math.fsum(terms))

    primes = [int(p) for p in sieve.primes_up_to(m)] if m >= 2 else []
    middle = math.fsum(math.log(p) * (m / p + 1) for p in primes if p > 2)
    bound = 2 * m * math.fsum(math.log(p) / p for p in primes)
    rhs = _down(bound)
    verdict = lhs_high <= _down(middle) and _up(middle) <= rhs

    logger.debug(f"smlarge on {interval}: count={count}, sum log i_m in [{lhs_low}, {lhs_high}]")
    report = LemmaReport(
        lemma="smlarge",
        m=m,
        lhs=lhs_high,
        rhs=rhs,
        verdict=verdict,
        interval=interval,
        extremal=_top(scores),
        details={
            "count": count,
            "threshold_log": threshold_log,
            "sum_log_lower": lhs_low,
            "sum_log_upper": lhs_high,
            "middle_step": middle,
            "chebyshev_constant": lhs_high / (m * math.log(m)) if m > 1 else None,
        },
    )
    return count, report


def slogmlarge_count(
    interval: Progression, m: int, sieve: Optional[FactorSieve] = None
) -> Tuple[int, LemmaReport]:
    """
    Count i in I with f(i) > (log log m)^4 / log m.

    The proof-line sums are exact rationals:
    sum f(i) = sum_p c_p / p <= sum_p (1/p)(m/p + 1) <= 2m sum_p 1/p^2,
    p over primes in (log m, m].
    """
    _require_length(interval, m)
    if m < 3:
        raise DomainError(f"log log m must be positive, needs m >= 3, got {m}")
    sieve = resolve_sieve(sieve, max(interval.max_in(), m))
    log_m = math.log(m)
    threshold = math.log(log_m) ** 4 / log_m

    count = 0
    scores: List[Tuple[Number, int]] = []
    counts: Dict[int, int] = {}
    for i in interval:
        value = Fraction(0)
        for p in sieve.prime_factors(i):
            if log_m < p <= m:
                value += Fraction(1, p)
                counts[p] = counts.get(p, 0) + 1
        if value > threshold:
            count += 1
        scores.append((value, i))

    total = sum((Fraction(c, p) for p, c in counts.items()), Fraction(0))
    primes = [int(p) for p in sieve.primes_up_to(m) if p > log_m]
    middle = sum((Fraction(1, p) * (Fraction(m, p) + 1) for p in primes), Fraction(0))
    bound = 2 * m * sum((Fraction(1, p * p) for p in primes), Fraction(0))

    report = LemmaReport(
        lemma="slogm",
        m=m,
        lhs=total,
        rhs=bound,
        verdict=total <= middle <= bound,
        interval=interval,
        extremal=_top(scores),
        details={
            "count": count,
            "threshold": threshold,
            "middle_step": middle,
            "sum_f_float": float(total),
            "normalized_sum": float(total) * log_m * math.log(log_m) / m,
        },
    )
    return count, report


def _log_primes(m: int, sieve: FactorSieve) -> List[int]:
    """Odd primes p <= log m."""
    return [int(p) for p in sieve.primes_up_to(math.log(m)) if p != 2] if m >= 3 else []


def _i0_codes(interval: Progression, primes: Sequence[int]) -> np.ndarray:
    """Per element, the bitmask of which primes divide it."""
    values = np.asarray(interval.as_range(), dtype=np.int64)
    codes = np.zeros(len(values), dtype=np.int64)
    for bit, p in enumerate(primes):
        codes |= (values % p == 0).astype(np.int64) << bit
    return codes


def _ratio_of_code(code: int, primes: Sequence[int]) -> Fraction:
    ratio = Fraction(1)
    for bit, p in enumerate(primes):
        if code >> bit & 1:
            ratio *= Fraction(p, p - 1)
    return ratio


def _phi_ratio_terms(
    interval: Progression, m: int, sieve: FactorSieve
) -> Tuple[List[int], np.ndarray, Dict[int, Fraction]]:
    primes = _log_primes(m, sieve)
    codes = _i0_codes(interval, primes)
    ratios = {code: _ratio_of_code(code, primes) for code in range(1 << len(primes))}
    return primes, codes, ratios


def phi_ratio_sum(
    interval: Progression, m: int, sieve: Optional[FactorSieve] = None
) -> Tuple[Fraction, LemmaReport]:
    """
    Exact sum over I of (i0/phi(i0) - 1), i0 the product of odd primes <= log m dividing i.

    Verdict: lhs < 3m/10. The upper chain
    sum i0/phi(i0) <= m prod(1 + 1/(p(p-1))) + prod p/(p-1)  (p odd, p <= log m)
    is checked exactly, and the second product against log m.
    """
    _require_length(interval, m)
    sieve = resolve_sieve(sieve, max(interval.max_in(), 3))
    primes, codes, ratios = _phi_ratio_terms(interval, m, sieve)
    tally = np.bincount(codes, minlength=1 << len(primes))
    lhs = sum((int(n) * (ratios[code] - 1) for code, n in enumerate(tally) if n), Fraction(0))
    rhs = Fraction(3, 10) * m

    first = Fraction(1)
    second = Fraction(1)
    for p in primes:
        first *= 1 + Fraction(1, p * (p - 1))
        second *= Fraction(p, p - 1)
    chain_bound = m * first + second
    second_le_log = m > 1 and second <= Fraction(lower(log_lower(m)))
    headline = m > 1 and lhs + m < Fraction(lower(Fraction(1296, 1000) * m + log_lower(m)))

    values = interval.elements()
    scores = [(ratios[int(code)], values[k]) for k, code in enumerate(codes)]
    report = LemmaReport(
        lemma="phi",
        m=m,
        lhs=lhs,
        rhs=rhs,
        verdict=lhs < rhs,
        interval=interval,
        proven=False,
        extremal=_top([(r - 1, i) for r, i in scores]),
        details={
            "primes": " ".join(str(p) for p in primes),
            "chain_bound": chain_bound,
            "chain_holds": lhs + m <= chain_bound,
            "second_product": second,
            "second_product_le_log_m": second_le_log,
            "below_1296m_plus_log_m": headline,
            "ratio_to_m": float(lhs) / m,
        },
    )
    if not lhs + m <= chain_bound:
        raise InconsistencyError(f"divisor-sum chain failed on {interval}")
    return lhs, report


def phi_tail_count(
    interval: Progression, m: int, t: Union[Fraction, int], sieve: Optional[FactorSieve] = None
) -> Tuple[int, LemmaReport]:
    """Count i with i0/phi(i0) > t against 0.3 m/(t - 1), with the exact Markov check."""
    t = Fraction(t)
    if t <= 1:
        raise DomainError(f"t must exceed 1, got {t}")
    _require_length(interval, m)
    sieve = resolve_sieve(sieve, max(interval.max_in(), 3))
    primes, codes, ratios = _phi_ratio_terms(interval, m, sieve)
    tally = np.bincount(codes, minlength=1 << len(primes))
    count = sum(int(n) for code, n in enumerate(tally) if ratios[code] > t)
    total = sum((int(n) * (ratios[code] - 1) for code, n in enumerate(tally) if n), Fraction(0))
    bound = Fraction(3, 10) * m / (t - 1)
    markov = count * (t - 1) <= total
    if not markov:
        raise InconsistencyError(f"Markov consistency failed on {interval} at t={t}")

    values = interval.elements()
    report = LemmaReport(
        lemma="tail",
        m=m,
        lhs=count,
        rhs=bound,
        verdict=count <= bound,
        interval=interval,
        proven=False,
        extremal=[values[k] for k, code in enumerate(codes) if ratios[int(code)] > t][:TOP_K],
        details={"t": t, "phi_ratio_sum": total, "markov_holds": markov},
    )
    return count, report


def _product_tree(factors: List[int]) -> int:
    if not factors:
        return 1
    layer = factors
    while len(layer) > 1:
        paired = [layer[k] * layer[k + 1] for k in range(0, len(layer) - 1, 2)]
        if len(layer) % 2:
            paired.append(layer[-1])
        layer = paired
    return layer[0]


@dataclass
class ZetaReport:
    """Partial products of prod(1 + 1/(p(p-1))), numerator/denominator left unreduced."""
    prime_limit: int
    numerator: int
    denominator: int
    odd_numerator: int
    odd_denominator: int

    @property
    def value(self) -> float:
        return self.numerator / self.denominator

    @property
    def odd_value(self) -> float:
        return self.odd_numerator / self.odd_denominator

    def as_fraction(self, odd: bool = False) -> Fraction:
        if odd:
            return Fraction(self.odd_numerator, self.odd_denominator)
        return Fraction(self.numerator, self.denominator)

    def below(self, bound: Fraction, odd: bool = False) -> bool:
        """Exact comparison partial product < bound."""
        num, den = (self.odd_numerator, self.odd_denominator) if odd else (self.numerator, self.denominator)
        return num * bound.denominator < bound.numerator * den

    def to_report(self) -> LemmaReport:
        full_bound = Fraction(1944, 1000)
        odd_bound = Fraction(1296, 1000)
        return LemmaReport(
            lemma="zeta",
            m=self.prime_limit,
            lhs=self.value,
            rhs=full_bound,
            verdict=self.below(full_bound) and self.below(odd_bound, odd=True),
            details={
                "value": self.value,
                "odd_value": self.odd_value,
                "below_1944": self.below(full_bound),
                "above_1943": not self.below(Fraction(1943, 1000)),
                "odd_below_1296": self.below(odd_bound, odd=True),
            },
        )


def zeta_constant_check(prime_limit: int, sieve: Optional[FactorSieve] = None) -> ZetaReport:
    """Exact partial product over primes <= prime_limit, plus the odd-primes-only variant."""
    if prime_limit < 2:
        raise DomainError(f"prime_limit must be at least 2, got {prime_limit}")
    sieve = resolve_sieve(sieve, prime_limit)
    primes = [int(p) for p in sieve.primes_up_to(prime_limit)]
    numerator = _product_tree([p * p - p + 1 for p in primes])
    denominator = _product_tree([p * (p - 1) for p in primes])
    logger.info(f"Zeta partial product over {len(primes)} primes <= {prime_limit}")
    # the factor at p = 2 is 3/2
    return ZetaReport(prime_limit, numerator, denominator, numerator * 2, denominator * 3)


def coprime_count_lower_bound(
    s: int,
    window: Progression,
    m: int,
    prime_bound: Optional[float] = None,
    sieve: Optional[FactorSieve] = None,
) -> Tuple[int, Fraction, LemmaReport]:
    """
    Count j in J coprime to s0 by inclusion-exclusion, against phi(s0)/s0 m - 2^omega(s0).

    s0 is the odd squarefree part of s on primes <= prime_bound (default log m).
    The bound is a proven inequality: a False verdict raises.
    """
    _require_length(window, m)
    if s < 1:
        raise DomainError(f"s must be positive, got {s}")
    sieve = resolve_sieve(sieve, max(s, 2))
    bound_for_primes = prime_bound if prime_bound is not None else math.log(m)
    s0 = sieve.odd_squarefree_part(s, bound_for_primes)
    primes = sieve.prime_factors(s0)
    count = sum(mu * _multiples_in(window, d) for d, mu in squarefree_divisors(primes))
    direct = sum(1 for j in window if gcd(j, s0) == 1)
    if count != direct:
        raise InconsistencyError(f"inclusion-exclusion gave {count}, direct count {direct}")
    bound = Fraction(sieve.phi(s0), s0) * m - 2 ** len(primes)
    verdict = count >= bound
    if not verdict:
        raise InconsistencyError(f"inclusion-exclusion bound failed for s={s}, J={window}")
    report = LemmaReport(
        lemma="incl-excl",
        m=m,
        lhs=count,
        rhs=bound,
        verdict=verdict,
        interval=window,
        details={"s": s, "s0": s0, "omega_s0": len(primes)},
    )
    return count, bound, report


def single_prime_exclusion_check(
    s: int, window: Progression, sieve: Optional[FactorSieve] = None
) -> LemmaReport:
    """
    When s_m is 1 or an odd prime q, at most m/q + 1 + omega(s) members of J
    fail to be 2-coprime to s (primes above m divide at most one member).
    """
    m = len(window)
    if m < 1:
        raise DomainError("window must be nonempty")
    sieve = resolve_sieve(sieve, max(s, 2))
    s_m = sieve.odd_squarefree_part(s, m)
    if s_m != 1 and not sieve.is_prime(s_m):
        raise DomainError(f"s_m = {s_m} is neither 1 nor an odd prime")
    bad = [j for j in window if not two_coprime(s, j)]
    bound = Fraction(sieve.omega(s))
    if s_m > 1:
        bound += Fraction(m, s_m) + 1
    verdict = len(bad) <= bound
    if not verdict:
        raise InconsistencyError(f"single-prime exclusion bound failed for s={s}, J={window}")
    return LemmaReport(
        lemma="single-prime",
        m=m,
        lhs=len(bad),
        rhs=bound,
        verdict=verdict,
        interval=window,
        extremal=bad[:TOP_K],
        details={"s": s, "s_m": s_m, "below_half": 2 * len(bad) < m},
    )


def jbound_probe(s: int, window: Progression, sieve: Optional[FactorSieve] = None) -> LemmaReport:
    """Members of J 2-coprime to s, and the constant count (log omega(s_m))^2 / m."""
    m = len(window)
    if m < 1:
        raise DomainError("window must be nonempty")
    sieve = resolve_sieve(sieve, max(s, 2))
    s_m = sieve.odd_squarefree_part(s, m)
    w = sieve.omega(s_m) if s_m > 1 else 0
    count = sum(1 for j in window if two_coprime(s, j))
    constant = count * math.log(w) ** 2 / m if w >= 2 else None
    return LemmaReport(
        lemma="jbound",
        m=m,
        lhs=count,
        rhs=Fraction(m, 2),
        verdict=2 * count > m,
        interval=window,
        proven=False,
        details={"s": s, "s_m": s_m, "omega_s_m": w, "constant": constant},
    )


def partner_count_check(s: int, window: Progression, sieve: Optional[FactorSieve] = None) -> LemmaReport:
    """
    Members of J coprime to s0 but not to s_m, counted exactly.

    Hard checks: that count is at most sum (m/p + 1) over odd p | s with
    log m < p <= m, which is at most 2m f(s); and the 2-coprime partners of s
    number at least (coprime to s_m) - #{odd p | s, p > m}, since such a
    prime divides at most one member of J. The 0.99 / 0.98 / 0.97 fractions
    of m phi(s0)/s0 are reported, not asserted.
    """
    m = len(window)
    if m < 1:
        raise DomainError("window must be nonempty")
    if s < 1:
        raise DomainError(f"s must be positive, got {s}")
    sieve = resolve_sieve(sieve, max(s, 2))
    log_m = math.log(m)
    odd_primes = [int(p) for p in sieve.odd_prime_factors(s)]
    small = [p for p in odd_primes if p <= log_m]
    middle = [p for p in odd_primes if log_m < p <= m]
    large = [p for p in odd_primes if p > m]
    s0 = math.prod(small)
    s_m = s0 * math.prod(middle)

    coprime_s0 = 0
    excluded: List[int] = []
    coprime_s_m = 0
    partners = 0
    for j in window:
        if gcd(j, s0) == 1:
            coprime_s0 += 1
            if gcd(j, s_m) == 1:
                coprime_s_m += 1
            else:
                excluded.append(j)
        if two_coprime(s, j):
            partners += 1

    exclusion_sum = sum((Fraction(m, p) + 1 for p in middle), Fraction(0))
    f_s = sum((Fraction(1, p) for p in middle), Fraction(0))
    two_m_f = 2 * m * f_s
    partner_floor = coprime_s_m - len(large)
    verdict = len(excluded) <= exclusion_sum <= two_m_f and partners >= partner_floor

    scale = Fraction(m * sieve.phi(s0), s0)
    report = LemmaReport(
        lemma="partners",
        m=m,
        lhs=len(excluded),
        rhs=exclusion_sum,
        verdict=verdict,
        interval=window,
        extremal=excluded[:TOP_K],
        details={
            "s": s,
            "s0": s0,
            "s_m": s_m,
            "two_m_f": two_m_f,
            "coprime_s0": coprime_s0,
            "coprime_s_m": coprime_s_m,
            "two_coprime_partners": partners,
            "partner_floor": partner_floor,
            "at_least_099": coprime_s0 >= Fraction(99, 100) * scale,
            "at_least_098": coprime_s_m >= Fraction(98, 100) * scale,
            "at_least_097": partners >= Fraction(97, 100) * scale,
        },
    )
    if not verdict:
        logger.warning(f"partner count chain failed for s={s}, J={window}")
    return report


@dataclass
class WindowProbe:
    """Least window length L with at least need = omega(q)^2 integers coprime to q."""
    q: int
    omega: int
    need: int
    length: Optional[int]
    c1_estimate: Optional[float]
    start: int = 1
    progression: Optional[Progression] = None

    def to_report(self) -> LemmaReport:
        return LemmaReport(
            lemma="iwaniec",
            m=self.q,
            lhs=self.length if self.length is not None else -1,
            rhs=self.need,
            verdict=self.length is not None,
            interval=self.progression,
            proven=False,
            details={
                "q": self.q,
                "omega": self.omega,
                "need": self.need,
                "start": self.start,
                "c1_estimate": self.c1_estimate,
            },
        )


def _check_window_modulus(q: int, sieve: FactorSieve) -> int:
    if q < 3 or q % 2 == 0:
        raise DomainError(f"q must be odd and greater than 1, got {q}")
    if sieve.radical(q) != q:
        raise DomainError(f"q must be squarefree, got {q}")
    return sieve.omega(q)


def _c1_estimate(length: Optional[int], q: int, w: int, sieve: FactorSieve) -> Optional[float]:
    if length is None:
        return None
    scale = float(sieve.phi_ratio(q)) * w * w * math.log(max(w, 2))
    return length / scale


def _periodic_window(q: int, need: int, start: int, sieve: FactorSieve) -> int:
    """Max over k of a[k + need] - a[k], a the integers coprime to q from ``start`` on."""
    phi_q = sieve.phi(q)
    periods = need // phi_q + 2
    span = np.arange(start, start + periods * q + 1, dtype=np.int64)
    coprime = span[np.gcd(span, q) == 1]
    first_period = int(np.searchsorted(coprime, start + q))
    return int(np.max(coprime[need : first_period + need] - coprime[:first_period]))


def _finite_window(indicator: np.ndarray, need: int) -> Optional[int]:
    """Least L such that every length-L window of the sequence holds need ones; None if none does."""
    n = len(indicator)
    cumulative = np.concatenate(([0], np.cumsum(indicator)))
    if cumulative[-1] < need:
        return None
    positions = np.flatnonzero(indicator)
    best = 0
    for x in range(n):
        k = int(cumulative[x])  # ones before x
        if k + need - 1 < len(positions):
            best = max(best, int(positions[k + need - 1]) - x + 1)
        else:
            best = max(best, n - x + 1)
    return best if best <= n else None


def iwaniec_window_probe(
    q: int, start: int = 1, sieve: Optional[FactorSieve] = None
) -> WindowProbe:
    """Scan one full period of window starts beginning at ``start``; L is periodic in start mod q."""
    sieve = resolve_sieve(sieve, q)
    w = _check_window_modulus(q, sieve)
    need = w * w
    length = _periodic_window(q, need, start, sieve)
    logger.debug(f"Window probe q={q}: need {need}, L={length}")
    return WindowProbe(q, w, need, length, _c1_estimate(length, q, w, sieve), start)


def iwaniec_progression_probe(
    q: int, progression: Progression, sieve: Optional[FactorSieve] = None
) -> WindowProbe:
    """
    Window probe along a step-2 progression J.

    Even members map to j/2 and odd members to (j + q)/2, both preserving
    gcd with odd q, so J becomes a run of consecutive integers. The scan is
    done on both sides and must agree.
    """
    if progression.step != 2:
        raise DomainError("progression mode needs a step-2 progression")
    sieve = resolve_sieve(sieve, q)
    w = _check_window_modulus(q, sieve)
    need = w * w
    members = np.asarray(progression.as_range(), dtype=np.int64)
    shift = 0 if progression.start % 2 == 0 else q
    image = (members + shift) // 2
    if len(image) > 1 and not np.all(np.diff(image) == 1):
        raise InconsistencyError("affine image of the progression is not consecutive")
    on_members = _finite_window((np.gcd(members, q) == 1).astype(np.int64), need)
    on_image = _finite_window((np.gcd(image, q) == 1).astype(np.int64), need)
    if on_members != on_image:
        raise InconsistencyError(f"progression probe disagrees: {on_members} vs {on_image}")
    return WindowProbe(
        q, w, need, on_image, _c1_estimate(on_image, q, w, sieve), int(image[0]) if len(image) else 1, progression
    )


def final_count_check(m: int, r: Union[Fraction, int]) -> LemmaReport:
    """
    Closing arithmetic with r = m/|S| >= 2.

    Verdict: 0.97m/(0.9r) > m - m/r. Details carry the displayed identity
    0.97/0.9 > 1.07, the pigeonhole form (count > |S| = m/r), and the tail
    step 0.3m/(0.9r - 1) <= 3m/(8r), which only holds for r >= 10.
    """
    r = Fraction(r)
    if r < 2:
        raise DomainError(f"r = m/|S| must be at least 2, got {r}")
    if m < 1:
        raise DomainError(f"m must be positive, got {m}")
    lhs = Fraction(97, 100) * m / (Fraction(9, 10) * r)
    rhs = m - m / r
    tail_left = Fraction(3, 10) * m / (Fraction(9, 10) * r - 1)
    tail_right = Fraction(3, 8) * m / r
    return LemmaReport(
        lemma="final",
        m=m,
        lhs=lhs,
        rhs=rhs,
        verdict=lhs > rhs,
        details={
            "r": r,
            "identity_97_90_gt_107_100": Fraction(97, 90) > Fraction(107, 100),
            "displayed_step": lhs > Fraction(107, 100) * m / r,
            "pigeonhole_step": lhs > m / r,
            "tail_step": tail_left <= tail_right,
        },
    )
