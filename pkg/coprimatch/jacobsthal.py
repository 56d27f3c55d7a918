"""
Jacobsthal function and long runs of integers sharing a factor with n.

Scans run over numpy coprimality indicators; g(k) only depends on the
radical of k, so its scan covers one period of rad(k).
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Dict, List, Optional, Tuple
import logging

import numpy as np
from tqdm import tqdm

from coprimatch.errors import CapacityError, DomainError
from coprimatch.number_theory import FactorSieve, log_upper, radical, resolve_sieve


logger = logging.getLogger(__name__)

# primes below this bound have a product far beyond any int64 limit
_PRIMORIAL_PRIME_BOUND = 200


@dataclass(frozen=True)
class GapWitness:
    """A run [run_start, run_start + run_length - 1] of integers each sharing a factor with modulus."""
    modulus: int
    run_start: int
    run_length: int
    primorial: bool = False

    @property
    def run_end(self) -> int:
        return self.run_start + self.run_length - 1

    def validate(self) -> bool:
        """Direct gcd of every run element with the modulus."""
        if self.run_length < 1 or self.run_start < 1:
            return False
        return all(gcd(x, self.modulus) > 1 for x in range(self.run_start, self.run_end + 1))

    def to_dict(self) -> Dict:
        """Convert to dictionary."""
        return {
            "n": self.modulus,
            "run_start": self.run_start,
            "run_length": self.run_length,
            "primorial": self.primorial,
        }


@lru_cache(maxsize=4096)
def _g_of_radical(rad: int) -> int:
    values = np.arange(1, rad + 2, dtype=np.int64)
    positions = values[np.gcd(values, rad) == 1]
    return int(np.max(np.diff(positions)))


def jacobsthal_g(k: int, sieve: Optional[FactorSieve] = None) -> int:
    """Least g such that every g consecutive integers contain one coprime to k."""
    if k < 1:
        raise DomainError(f"Jacobsthal function is defined for k >= 1, got {k}")
    if k == 1:
        return 1
    return _g_of_radical(radical(k, resolve_sieve(sieve, k)))


def _longest_run(noncoprime: np.ndarray) -> Tuple[int, int]:
    """(offset, length) of the first longest run of True values."""
    padded = np.concatenate(([False], noncoprime, [False])).astype(np.int8)
    edges = np.diff(padded)
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1)
    if len(starts) == 0:
        return 0, 0
    lengths = ends - starts
    best = int(np.argmax(lengths))  # first maximum, i.e. the smallest start
    return int(starts[best]), int(lengths[best])


def longest_noncoprime_run(n: int) -> GapWitness:
    """Longest run in [1, n] of integers sharing a factor with n; ties go to the smallest start."""
    if n < 2:
        raise DomainError(f"n must be at least 2, got {n}")
    values = np.arange(1, n + 1, dtype=np.int64)
    offset, length = _longest_run(np.gcd(values, n) > 1)
    return GapWitness(modulus=n, run_start=offset + 1, run_length=length)


def primorials(limit: int, sieve: Optional[FactorSieve] = None) -> List[int]:
    """2, 6, 30, 210, ... up to limit."""
    sieve = resolve_sieve(sieve, _PRIMORIAL_PRIME_BOUND)
    result: List[int] = []
    product = 1
    for p in sieve.primes_up_to(_PRIMORIAL_PRIME_BOUND):
        product *= int(p)
        if product > limit:
            return result
        result.append(product)
    raise CapacityError(f"primorials up to {limit} need primes beyond {_PRIMORIAL_PRIME_BOUND}")


def _qualifies(witness: GapWitness) -> bool:
    # certified: the log is rounded up
    return witness.run_length >= log_upper(witness.modulus)


def _search_chunk(bounds: Tuple[int, int]) -> List[GapWitness]:
    low, high = bounds
    hits = []
    for n in range(low, high):
        witness = longest_noncoprime_run(n)
        if _qualifies(witness):
            hits.append(witness)
    return hits


def erdos_witness_search(
    limit: int,
    workers: int = 1,
    progress: bool = False,
    chunk_size: int = 500,
    sieve: Optional[FactorSieve] = None,
) -> List[GapWitness]:
    """All n <= limit whose longest non-coprime run in [1, n] has length >= log n, ascending."""
    if limit < 2:
        return []
    flags = set(primorials(limit, sieve))
    chunks = [(low, min(low + chunk_size, limit + 1)) for low in range(2, limit + 1, chunk_size)]
    hits: List[GapWitness] = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_search_chunk, chunks)
            for chunk_hits in tqdm(results, total=len(chunks), disable=not progress, desc="erdos-scan"):
                hits.extend(chunk_hits)
    else:
        for chunk in tqdm(chunks, disable=not progress, desc="erdos-scan"):
            hits.extend(_search_chunk(chunk))

    hits = [
        GapWitness(w.modulus, w.run_start, w.run_length, primorial=w.modulus in flags) for w in hits
    ]
    logger.info(f"Erdos search to {limit}: {len(hits)} qualifying n, {len(flags)} primorials in range")
    return hits
