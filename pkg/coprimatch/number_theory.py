"""
Sieve-backed arithmetic functions.

This module is the single factorization authority of the package. It provides:
- FactorSieve: smallest-prime-factor table with O(log k) factorization
- omega, phi, phi_ratio, odd_squarefree_part, f_value on top of it
- two_coprime (gcd is a power of 2)
- the explicit bounds omega(k) <= 2 log k and k/phi(k) <= 3 log omega(k)
  as certified checks and as vectorized sweeps

Conventions for k = 1 follow the empty product: omega(1) = 0, phi(1) = 1,
odd_squarefree_part(1, b) = 1, f_value(1, m) = 0.

Arithmetic values are exact ints / Fractions. Floats only appear on the
transcendental side of a comparison, and are then rounded outward so that a
True verdict is certified.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, isqrt
from typing import Iterator, List, Optional, Sequence, Tuple, Union
import logging
import math
import threading

import numpy as np

from coprimatch.config import SieveSettings
from coprimatch.errors import DomainError, SieveRangeError


logger = logging.getLogger(__name__)

Real = Union[int, float, Fraction]

# log() is accurate to within 1 ulp; nudging by this many ulps gives a safe enclosure
_ULP_MARGIN = 2


def lower(value: float) -> float:
    """Round a float result down by a few ulps."""
    for _ in range(_ULP_MARGIN):
        value = math.nextafter(value, -math.inf)
    return value


def upper(value: float) -> float:
    """Round a float result up by a few ulps."""
    for _ in range(_ULP_MARGIN):
        value = math.nextafter(value, math.inf)
    return value


def log_lower(x: Real) -> float:
    """Lower bound of the natural log of a positive number."""
    return lower(math.log(x))


def log_upper(x: Real) -> float:
    """Upper bound of the natural log of a positive number."""
    return upper(math.log(x))


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of a positive integer, primes ascending."""
    value: int
    factors: Tuple[Tuple[int, int], ...] = ()

    @property
    def primes(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def omega(self) -> int:
        return len(self.factors)

    def product(self) -> int:
        result = 1
        for p, e in self.factors:
            result *= p ** e
        return result

    def to_dict(self):
        """Convert to dictionary."""
        return {"value": self.value, "factors": [[p, e] for p, e in self.factors]}


class FactorSieve:
    """
    Smallest-prime-factor table for [2, limit].

    Immutable after construction; safe for unsynchronized concurrent reads.
    """

    def __init__(self, limit: int, spf: np.ndarray):
        self.limit = limit
        self.spf = spf
        self.spf.setflags(write=False)
        self._primes: Optional[np.ndarray] = None

    def __contains__(self, k: int) -> bool:
        return 1 <= k <= self.limit

    def __repr__(self) -> str:
        return f"FactorSieve(limit={self.limit})"

    def _require(self, k: int) -> None:
        if not 1 <= k <= self.limit:
            raise SieveRangeError(f"{k} is outside the sieve range [1, {self.limit}]")

    def smallest_prime_factor(self, k: int) -> int:
        if k < 2:
            raise DomainError(f"smallest prime factor undefined for {k}")
        self._require(k)
        return int(self.spf[k])

    def is_prime(self, k: int) -> bool:
        return k >= 2 and self.smallest_prime_factor(k) == k

    @property
    def primes(self) -> np.ndarray:
        """All primes <= limit (int64, ascending)."""
        if self._primes is None:
            index = np.arange(self.limit + 1, dtype=np.int64)
            primes = np.flatnonzero(self.spf == index)
            primes = primes[primes >= 2].astype(np.int64)
            primes.setflags(write=False)
            self._primes = primes
        return self._primes

    def primes_up_to(self, x: Real) -> np.ndarray:
        """Primes p with p <= x (x may be real)."""
        bound = math.floor(x)
        if bound > self.limit:
            raise SieveRangeError(f"primes up to {bound} need a sieve of that size")
        primes = self.primes
        return primes[: int(np.searchsorted(primes, bound, side="right"))]

    def factorize(self, k: int) -> Factorization:
        self._require(k)
        factors: List[Tuple[int, int]] = []
        rest = k
        while rest > 1:
            p = int(self.spf[rest])
            exponent = 0
            while rest % p == 0:
                rest //= p
                exponent += 1
            factors.append((p, exponent))
        return Factorization(value=k, factors=tuple(factors))

    def prime_factors(self, k: int) -> Tuple[int, ...]:
        """Distinct primes dividing k, ascending."""
        self._require(k)
        primes: List[int] = []
        rest = k
        while rest > 1:
            p = int(self.spf[rest])
            primes.append(p)
            while rest % p == 0:
                rest //= p
        return tuple(primes)

    def odd_prime_factors(self, k: int) -> Tuple[int, ...]:
        return tuple(p for p in self.prime_factors(k) if p != 2)

    def omega(self, k: int) -> int:
        return len(self.prime_factors(k))

    def phi(self, k: int) -> int:
        result = k
        for p in self.prime_factors(k):
            result = result // p * (p - 1)
        return result

    def phi_ratio(self, k: int) -> Fraction:
        """k/phi(k) as an exact rational."""
        return Fraction(k, self.phi(k))

    def radical(self, k: int) -> int:
        result = 1
        for p in self.prime_factors(k):
            result *= p
        return result

    def odd_squarefree_part(self, k: int, bound: Real) -> int:
        """Product of the distinct odd primes p <= bound dividing k."""
        result = 1
        for p in self.prime_factors(k):
            if p != 2 and p <= bound:
                result *= p
        return result

    def f_value(self, i: int, m: int) -> Fraction:
        """Sum of 1/p over primes p | i with log m < p <= m."""
        if m < 3:
            raise DomainError(f"f_value needs m >= 3, got {m}")
        log_m = math.log(m)
        total = Fraction(0)
        for p in self.prime_factors(i):
            if log_m < p <= m:
                total += Fraction(1, p)
        return total

    def omega_table(self, limit: Optional[int] = None) -> np.ndarray:
        """omega(k) for k = 0..limit (entries 0 and 1 are 0)."""
        limit = self.limit if limit is None else limit
        self._require(max(limit, 1))
        table = np.zeros(limit + 1, dtype=np.int16)
        for p in self.primes_up_to(limit):
            table[int(p)::int(p)] += 1
        return table

    def phi_table(self, limit: Optional[int] = None) -> np.ndarray:
        """phi(k) for k = 0..limit (entry 0 is 0)."""
        limit = self.limit if limit is None else limit
        self._require(max(limit, 1))
        table = np.arange(limit + 1, dtype=np.int64)
        for p in self.primes_up_to(limit):
            p = int(p)
            table[p::p] -= table[p::p] // p
        return table


def build_sieve(limit: int, settings: Optional[SieveSettings] = None) -> FactorSieve:
    """
    Build a smallest-prime-factor sieve for [2, limit].

    Raises CapacityError when limit < 2 or limit exceeds the memory budget.
    """
    settings = settings or SieveSettings.from_env()
    settings.check(limit)
    dtype = np.int32 if limit < 2**31 else np.int64
    spf = np.zeros(limit + 1, dtype=dtype)
    for p in range(2, isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    unset = np.flatnonzero(spf[2:] == 0) + 2
    spf[unset] = unset
    logger.debug(f"Built factor sieve up to {limit}")
    return FactorSieve(limit, spf)


_shared_lock = threading.Lock()
_shared: Optional[FactorSieve] = None


def shared_sieve(minimum: int = 2) -> FactorSieve:
    """
    Process-wide sieve covering at least ``minimum``.

    Grows geometrically when a larger argument shows up; raises CapacityError
    once the budget would be exceeded.
    """
    global _shared
    current = _shared
    if current is not None and current.limit >= minimum:
        return current
    with _shared_lock:
        current = _shared
        if current is not None and current.limit >= minimum:
            return current
        settings = SieveSettings.from_env()
        settings.check(max(minimum, 2))
        target = max(minimum, settings.default_limit)
        if current is not None:
            target = max(target, 2 * current.limit)
        target = min(target, settings.max_limit)
        logger.info(f"Growing shared sieve to {target}")
        _shared = build_sieve(target, settings)
        return _shared


def configure_shared_sieve(limit: int) -> FactorSieve:
    """Replace the shared sieve with one of exactly ``limit``."""
    global _shared
    sieve = build_sieve(limit)
    with _shared_lock:
        _shared = sieve
    return sieve


def resolve_sieve(sieve: Optional[FactorSieve], k: int) -> FactorSieve:
    return sieve if sieve is not None else shared_sieve(k)


def factorize(sieve: FactorSieve, k: int) -> Factorization:
    """Factorize 1 <= k <= sieve.limit."""
    return sieve.factorize(k)


def omega(k: int, sieve: Optional[FactorSieve] = None) -> int:
    return resolve_sieve(sieve, k).omega(k)


def phi(k: int, sieve: Optional[FactorSieve] = None) -> int:
    return resolve_sieve(sieve, k).phi(k)


def phi_ratio(k: int, sieve: Optional[FactorSieve] = None) -> Fraction:
    return resolve_sieve(sieve, k).phi_ratio(k)


def radical(k: int, sieve: Optional[FactorSieve] = None) -> int:
    return resolve_sieve(sieve, k).radical(k)


def odd_squarefree_part(k: int, bound: Real, sieve: Optional[FactorSieve] = None) -> int:
    return resolve_sieve(sieve, k).odd_squarefree_part(k, bound)


def f_value(i: int, m: int, sieve: Optional[FactorSieve] = None) -> Fraction:
    return resolve_sieve(sieve, i).f_value(i, m)


def odd_part(k: int) -> int:
    """k with all factors of 2 removed."""
    if k < 1:
        raise DomainError(f"odd part undefined for {k}")
    return k >> ((k & -k).bit_length() - 1)


def two_coprime(s: int, t: int) -> bool:
    """True iff gcd(s, t) is a power of 2 (1 included)."""
    if s < 1 or t < 1:
        raise DomainError(f"two_coprime needs positive arguments, got ({s}, {t})")
    return odd_part(gcd(s, t)) == 1


def squarefree_divisors(primes: Sequence[int]) -> Iterator[Tuple[int, int]]:
    """Yield (d, mu(d)) for every divisor d of the product of distinct ``primes``."""
    for size in range(len(primes) + 1):
        sign = -1 if size % 2 else 1
        for subset in combinations(primes, size):
            d = 1
            for p in subset:
                d *= p
            yield d, sign


def check_omega_bound(k: int, sieve: Optional[FactorSieve] = None) -> bool:
    """omega(k) <= 2 log k, with the log rounded down."""
    if k <= 1:
        raise DomainError(f"omega bound is stated for k > 1, got {k}")
    return omega(k, sieve) <= 2 * log_lower(k)


def check_phi_log_bound(k: int, sieve: Optional[FactorSieve] = None) -> bool:
    """k/phi(k) <= 3 log omega(k) for odd k with omega(k) >= 2, bound rounded down."""
    sieve = resolve_sieve(sieve, k)
    if k % 2 == 0:
        raise DomainError(f"phi/log bound is stated for odd k, got {k}")
    w = sieve.omega(k)
    if w < 2:
        raise DomainError(f"phi/log bound needs omega(k) >= 2, got omega({k}) = {w}")
    return sieve.phi_ratio(k) <= Fraction(lower(3 * log_lower(w)))


def sweep_omega_bound(limit: int, sieve: Optional[FactorSieve] = None) -> List[int]:
    """All k in [2, limit] violating omega(k) <= 2 log k."""
    sieve = resolve_sieve(sieve, limit)
    table = sieve.omega_table(limit)
    k = np.arange(2, limit + 1, dtype=np.float64)
    suspects = np.flatnonzero(table[2:] > 2 * np.log(k) - 1e-9) + 2
    violators = [int(s) for s in suspects if not check_omega_bound(int(s), sieve)]
    logger.info(f"omega bound sweep to {limit}: {len(violators)} violations")
    return violators


def sweep_phi_log_bound(limit: int, sieve: Optional[FactorSieve] = None) -> List[int]:
    """All odd k <= limit with omega(k) >= 2 violating k/phi(k) <= 3 log omega(k)."""
    sieve = resolve_sieve(sieve, limit)
    omegas = sieve.omega_table(limit)
    phis = sieve.phi_table(limit)
    k = np.arange(limit + 1, dtype=np.int64)
    eligible = (k % 2 == 1) & (omegas >= 2)
    idx = np.flatnonzero(eligible)
    ratio = k[idx] / phis[idx]
    bound = 3 * np.log(omegas[idx].astype(np.float64))
    suspects = idx[ratio > bound - 1e-9]
    violators = [int(s) for s in suspects if not check_phi_log_bound(int(s), sieve)]
    logger.info(f"phi/log bound sweep to {limit}: {len(violators)} violations")
    return violators


def format_number(value):
    """JSON-friendly form: Fractions as "p/q" (plain int when integral), other values unchanged."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", an integer or a decimal into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"not a rational number: {text!r}") from None
