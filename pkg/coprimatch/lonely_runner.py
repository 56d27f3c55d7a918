"""
Exact lonely runner checks for small velocity sets.

The objective h(t) = min_i ||v_i t|| is piecewise linear with slopes +-v_i,
so its supremum over [0, 1) is attained at a breakpoint: a peak a/(2v_i) of
one term or a crossing k/(v_i + v_j), k/|v_i - v_j| of two terms. Every
candidate is a rational a/b and is evaluated with integer arithmetic over
the common denominator b.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import comb, gcd
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple
import logging
import random

import numpy as np
from tqdm import tqdm

from coprimatch.errors import CapacityError, DomainError
from coprimatch.number_theory import format_number


logger = logging.getLogger(__name__)


@dataclass
class RunnerBudget:
    """Work limits of the exact engine, the grid fallback and the regime scan."""
    max_candidates: int = 2_000_000
    max_grid_points: int = 5_000_000
    max_exhaustive_sets: int = 200_000


@dataclass(frozen=True)
class RunnerInstance:
    """Distinct positive integer velocities, kept in increasing order."""
    velocities: Tuple[int, ...]

    def __post_init__(self):
        if not self.velocities:
            raise DomainError("a runner instance needs at least one velocity")
        if any(v < 1 for v in self.velocities):
            raise DomainError(f"velocities must be positive, got {list(self.velocities)}")
        if len(set(self.velocities)) != len(self.velocities):
            raise DomainError(f"velocities must be distinct, got {list(self.velocities)}")
        object.__setattr__(self, "velocities", tuple(sorted(self.velocities)))

    @classmethod
    def of(cls, velocities: Iterable[int]) -> "RunnerInstance":
        return cls(tuple(int(v) for v in velocities))

    @classmethod
    def parse(cls, text: str) -> "RunnerInstance":
        """Parse a comma-separated velocity list such as "1,2,3"."""
        try:
            return cls.of(int(part) for part in text.split(",") if part.strip())
        except ValueError:
            raise DomainError(f"malformed velocity list {text!r}") from None

    @property
    def n(self) -> int:
        return len(self.velocities)

    @property
    def target(self) -> Fraction:
        return Fraction(1, self.n + 1)

    def scaled(self, factor: int) -> "RunnerInstance":
        return RunnerInstance(tuple(factor * v for v in self.velocities))

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.velocities)


@dataclass
class RunnerVerdict:
    """Exact supremum of min_i ||v_i t|| and an attaining t."""
    instance: RunnerInstance
    best_t: Fraction
    achieved: Fraction
    target: Fraction
    lonely: bool
    candidates: int = 0

    def to_dict(self) -> Dict:
        """Convert to dictionary."""
        return {
            "velocities": list(self.instance.velocities),
            "best_t": format_number(self.best_t),
            "achieved": format_number(self.achieved),
            "target": format_number(self.target),
            "lonely": self.lonely,
            "candidates": self.candidates,
        }


def distance_to_integer(x: Fraction) -> Fraction:
    """||x||, the distance from x to the nearest integer."""
    frac = x - (x.numerator // x.denominator)
    return min(frac, 1 - frac)


def objective(velocities: Sequence[int], t: Fraction) -> Fraction:
    """min_i ||v_i t|| in exact rationals."""
    return min(distance_to_integer(v * t) for v in velocities)


def _candidate_estimate(velocities: Sequence[int]) -> int:
    ordered = sorted(velocities)
    pairs = sum(k * v for k, v in enumerate(ordered))  # each v_j paired with the smaller ones
    return 2 * sum(ordered) + 2 * pairs


def _candidates(velocities: Sequence[int]) -> Set[Tuple[int, int]]:
    """Reduced (a, b) with a/b in [0, 1) covering every breakpoint."""
    found: Set[Tuple[int, int]] = set()

    def add_all(denominator: int) -> None:
        for a in range(denominator):
            g = gcd(a, denominator)
            found.add((a // g, denominator // g))

    for v in velocities:
        add_all(2 * v)
    for v, w in combinations(velocities, 2):
        add_all(v + w)
        add_all(abs(w - v))
    return found


def _min_distance(velocities: Sequence[int], a: int, b: int) -> int:
    """Numerator over b of min_i ||v_i a/b||."""
    best = b
    for v in velocities:
        r = v * a % b
        best = min(best, r, b - r)
    return best


def check_lonely(instance: RunnerInstance, budget: Optional[RunnerBudget] = None) -> RunnerVerdict:
    """Exact sup over t of min_i ||v_i t||; ties in t go to the smallest t."""
    budget = budget or RunnerBudget()
    velocities = instance.velocities
    estimate = _candidate_estimate(velocities)
    if estimate > budget.max_candidates:
        raise CapacityError(
            f"{estimate} breakpoint candidates exceed the budget {budget.max_candidates}; "
            f"use certified_grid_check instead"
        )
    candidates = sorted(_candidates(velocities), key=lambda ab: Fraction(*ab))
    best_t = Fraction(0)
    achieved = Fraction(-1)
    for a, b in candidates:
        value = Fraction(_min_distance(velocities, a, b), b)
        if value > achieved:
            achieved = value
            best_t = Fraction(a, b)
    logger.debug(f"check_lonely {instance}: {len(candidates)} candidates, sup {achieved} at t={best_t}")
    return RunnerVerdict(
        instance=instance,
        best_t=best_t,
        achieved=achieved,
        target=instance.target,
        lonely=achieved >= instance.target,
        candidates=len(candidates),
    )


class GridVerdict(str, Enum):
    LONELY = "lonely_certified"
    NOT_LONELY = "not_lonely_certified"
    INCONCLUSIVE = "inconclusive"


@dataclass
class GridResult:
    instance: RunnerInstance
    verdict: GridVerdict
    epsilon: Fraction
    step: Fraction
    grid_max: Fraction
    upper_bound: Fraction
    points: int

    def to_dict(self) -> Dict:
        """Convert to dictionary."""
        return {
            "velocities": list(self.instance.velocities),
            "verdict": self.verdict.value,
            "epsilon": format_number(self.epsilon),
            "step": format_number(self.step),
            "grid_max": format_number(self.grid_max),
            "upper_bound": format_number(self.upper_bound),
            "target": format_number(self.instance.target),
            "points": self.points,
        }


def certified_grid_check(
    instance: RunnerInstance, epsilon: Fraction, budget: Optional[RunnerBudget] = None
) -> GridResult:
    """
    Grid fallback with step delta = epsilon / (2 max v).

    h is Lipschitz with constant max v, so sup h <= grid max + max v * delta / 2.
    Lonely is certified when the grid max clears target + epsilon, not lonely
    when the upper bound stays below target - epsilon; anything in between is
    inconclusive.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    budget = budget or RunnerBudget()
    top = max(instance.velocities)
    step = epsilon / (2 * top)
    p, q = step.numerator, step.denominator
    count = -(-q // p)  # grid points k * step for k in [0, ceil(1/step))
    if count > budget.max_grid_points:
        raise CapacityError(f"{count} grid points exceed the budget {budget.max_grid_points}")

    safe = top * p * count < 2**62
    k = np.arange(count, dtype=np.int64 if safe else object)
    nearest = np.full(count, q, dtype=np.int64 if safe else object)
    for v in instance.velocities:
        r = (v * p * k) % q
        nearest = np.minimum(nearest, np.minimum(r, q - r))
    grid_max = Fraction(int(nearest.max()), q)
    upper_bound = grid_max + top * step / 2

    target = instance.target
    if grid_max >= target + epsilon:
        verdict = GridVerdict.LONELY
    elif upper_bound <= target - epsilon:
        verdict = GridVerdict.NOT_LONELY
    else:
        verdict = GridVerdict.INCONCLUSIVE
    return GridResult(instance, verdict, epsilon, step, grid_max, upper_bound, count)


@dataclass
class RegimeReport:
    """check_lonely over the velocity sets v_1 < ... < v_n <= 2n - gap."""
    n: int
    gap: int
    top: int
    exhaustive: bool
    instances: int
    failures: List[RunnerVerdict] = field(default_factory=list)
    min_achieved: Optional[Fraction] = None
    min_instance: Optional[RunnerInstance] = None
    seed: Optional[int] = None

    @property
    def all_lonely(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict:
        """Convert to dictionary."""
        return {
            "n": self.n,
            "gap": self.gap,
            "max_velocity": self.top,
            "exhaustive": self.exhaustive,
            "instances": self.instances,
            "all_lonely": self.all_lonely,
            "failures": [f.to_dict() for f in self.failures],
            "min_achieved": format_number(self.min_achieved) if self.min_achieved is not None else None,
            "min_instance": list(self.min_instance.velocities) if self.min_instance else None,
            "seed": self.seed,
        }


def _velocity_sets(
    n: int, top: int, samples: Optional[int], seed: int, budget: RunnerBudget
) -> Tuple[List[Tuple[int, ...]], bool]:
    total = comb(top, n)
    if samples is None:
        if total > budget.max_exhaustive_sets:
            raise CapacityError(
                f"{total} velocity sets exceed the exhaustive budget {budget.max_exhaustive_sets}; "
                f"pass a sample count"
            )
        return list(combinations(range(1, top + 1), n)), True
    rng = random.Random(seed)
    population = range(1, top + 1)
    return [tuple(sorted(rng.sample(population, n))) for _ in range(samples)], False


def _check_set(velocities: Tuple[int, ...]) -> RunnerVerdict:
    return check_lonely(RunnerInstance(velocities))


def bp_regime_scan(
    n: int,
    gap: int,
    samples: Optional[int] = None,
    seed: int = 0,
    workers: int = 1,
    progress: bool = False,
    budget: Optional[RunnerBudget] = None,
) -> RegimeReport:
    """Run check_lonely over every (or a seeded sample of) n-subset of [1, 2n - gap]."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    top = 2 * n - gap
    if top < n:
        raise DomainError(f"no {n} distinct velocities fit below 2n - gap = {top}")
    budget = budget or RunnerBudget()
    sets, exhaustive = _velocity_sets(n, top, samples, seed, budget)
    logger.info(f"Runner regime scan n={n}, gap={gap}: {len(sets)} velocity sets")

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            verdicts = list(tqdm(pool.map(_check_set, sets, chunksize=64), total=len(sets),
                                 disable=not progress, desc="runner-scan"))
    else:
        verdicts = [_check_set(v) for v in tqdm(sets, disable=not progress, desc="runner-scan")]

    report = RegimeReport(n, gap, top, exhaustive, len(sets), seed=None if exhaustive else seed)
    for verdict in verdicts:
        if not verdict.lonely:
            report.failures.append(verdict)
        if report.min_achieved is None or verdict.achieved < report.min_achieved:
            report.min_achieved = verdict.achieved
            report.min_instance = verdict.instance
    if report.failures:
        logger.warning(f"{len(report.failures)} velocity sets are not lonely")
    return report
