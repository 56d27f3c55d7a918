"""
Interval-pair scan pipeline.

For every pair of step-1 intervals I = [a, a + len - 1], J = [b, b + len - 1]
inside [1, n_max] (a <= b), record whether the parity split succeeds,
whether a direct coprime matching exists, the minimum defect and, on
failure, the Hall witness. Rows come back in task order whatever the
worker count, so equal configs give identical output.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple
import logging
import random

from tqdm import tqdm

from coprimatch.coprime_matcher import (
    FailureCertificate,
    detect_blockers,
    parity_split_match,
)
from coprimatch.errors import CapacityError, DomainError, InconsistencyError
from coprimatch.intervals import Progression
from coprimatch.matching import Relation, build_graph, hall_witness, max_matching


logger = logging.getLogger(__name__)

SCAN_COLUMNS = [
    "length",
    "left",
    "right",
    "parity",
    "parity_split_ok",
    "direct_ok",
    "defect",
    "witness_S",
    "witness_T",
    "blockers",
]


class ParityFilter(str, Enum):
    """Which start-parity combinations a scan visits."""
    ALL = "all"
    OPPOSITE = "opposite"
    SAME_ODD = "same-odd"
    SAME_EVEN = "same-even"

    def accepts(self, a: int, b: int) -> bool:
        if self is ParityFilter.ALL:
            return True
        if self is ParityFilter.OPPOSITE:
            return a % 2 != b % 2
        if self is ParityFilter.SAME_ODD:
            return a % 2 == 1 and b % 2 == 1
        return a % 2 == 0 and b % 2 == 0


def parse_lengths(text: str) -> List[int]:
    """Parse "8", "2,4,6" or "4-12" (ranges inclusive, items comma-separated)."""
    lengths: List[int] = []
    try:
        for item in text.split(","):
            item = item.strip()
            if not item:
                continue
            if "-" in item:
                low, high = (int(x) for x in item.split("-", 1))
                lengths.extend(range(low, high + 1))
            else:
                lengths.append(int(item))
    except ValueError:
        raise DomainError(f"malformed length list {text!r}") from None
    if not lengths or min(lengths) < 1:
        raise DomainError(f"lengths must be positive, got {text!r}")
    return sorted(set(lengths))


@dataclass
class ScanConfig:
    """Configuration for the scan pipeline."""
    n_max: int
    lengths: List[int]
    parity: ParityFilter = ParityFilter.ALL
    samples: Optional[int] = None
    seed: int = 0
    workers: int = 1
    progress: bool = False
    max_pairs: int = 2_000_000


def _parity_label(a: int, b: int) -> str:
    if a % 2 != b % 2:
        return "opposite"
    return "same-odd" if a % 2 else "same-even"


@dataclass
class ScanRow:
    """Verdicts for one interval pair; witness sets are space-separated element lists."""
    length: int
    left: int
    right: int
    parity: str
    parity_split_ok: Optional[bool]
    direct_ok: bool
    defect: int
    witness_S: str = ""
    witness_T: str = ""
    blockers: str = ""

    @property
    def failed(self) -> bool:
        return not self.direct_ok

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {name: getattr(self, name) for name in SCAN_COLUMNS}


@dataclass
class ScanSummary:
    pairs: int
    failures: int
    parity_split_failures: int
    largest_failure_length: Optional[int]

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "pairs": self.pairs,
            "failures": self.failures,
            "parity_split_failures": self.parity_split_failures,
            "largest_failure_length": self.largest_failure_length,
        }


@dataclass
class ScanResult:
    config: ScanConfig
    rows: List[ScanRow] = field(default_factory=list)
    summary: Optional[ScanSummary] = None

    def failures(self) -> List[ScanRow]:
        return [row for row in self.rows if row.failed]


def _parity_applies(length: int, a: int, b: int) -> bool:
    return length % 2 == 0 or a % 2 != b % 2


def scan_pair(task: Tuple[int, int, int]) -> ScanRow:
    """Evaluate one (length, a, b) task."""
    length, a, b = task
    left = Progression(a, length)
    right = Progression(b, length)

    parity_ok: Optional[bool] = None
    if _parity_applies(length, a, b):
        parity_ok = parity_split_match(left, right) is not None

    graph = build_graph(left, right, Relation.COPRIME)
    result = max_matching(graph)
    row = ScanRow(
        length=length,
        left=a,
        right=b,
        parity=_parity_label(a, b),
        parity_split_ok=parity_ok,
        direct_ok=result.is_perfect,
        defect=length - result.size,
    )
    if parity_ok and not row.direct_ok:
        raise InconsistencyError(f"parity split matched {left}, {right} but direct matching did not")
    if not row.direct_ok:
        witnessed = hall_witness(graph, result)
        S_idx, T_idx = witnessed.witness
        certificate = FailureCertificate(
            left=left,
            right=right,
            S=[graph.left_values[i] for i in S_idx],
            T=[graph.right_values[j] for j in T_idx],
            max_coprime_pairs=result.size,
        )
        if not certificate.validate():
            raise InconsistencyError(f"witness for {left}, {right} did not re-validate")
        row.witness_S = " ".join(str(s) for s in certificate.S)
        row.witness_T = " ".join(str(t) for t in certificate.T)
        row.blockers = " ".join(detect_blockers(left, right))
    return row


class IntervalScanPipeline:
    """
    Exhaustive or sampled scan of interval pairs.

    Steps:
    1. Enumerate (length, a, b) tasks under the parity filter
    2. Enforce the pair budget, or draw a seeded sample
    3. Evaluate tasks, in a process pool when workers > 1
    4. Summarize failures
    """

    def __init__(self, config: ScanConfig):
        if config.n_max < 1:
            raise DomainError(f"n_max must be positive, got {config.n_max}")
        if not config.lengths:
            raise DomainError("at least one length is needed")
        self.config = config

    def _exhaustive_tasks(self) -> Iterator[Tuple[int, int, int]]:
        for length in self.config.lengths:
            last_start = self.config.n_max - length + 1
            for a in range(1, last_start + 1):
                for b in range(a, last_start + 1):
                    if self.config.parity.accepts(a, b):
                        yield length, a, b

    def count_pairs(self) -> int:
        total = 0
        for length in self.config.lengths:
            starts = max(self.config.n_max - length + 1, 0)
            total += starts * (starts + 1) // 2
        return total

    def _sampled_tasks(self, samples: int) -> List[Tuple[int, int, int]]:
        rng = random.Random(self.config.seed)
        lengths = [length for length in self.config.lengths if length <= self.config.n_max]
        if not lengths:
            return []
        tasks: List[Tuple[int, int, int]] = []
        attempts = 0
        while len(tasks) < samples and attempts < 100 * samples:
            attempts += 1
            length = rng.choice(lengths)
            last_start = self.config.n_max - length + 1
            a, b = sorted((rng.randint(1, last_start), rng.randint(1, last_start)))
            if self.config.parity.accepts(a, b):
                tasks.append((length, a, b))
        return tasks

    def tasks(self) -> List[Tuple[int, int, int]]:
        if self.config.samples is not None:
            return self._sampled_tasks(self.config.samples)
        total = self.count_pairs()
        if total > self.config.max_pairs:
            raise CapacityError(
                f"{total} interval pairs exceed the scan budget {self.config.max_pairs}; "
                f"pass --samples to scan a seeded sample"
            )
        return list(self._exhaustive_tasks())

    def run(self) -> ScanResult:
        tasks = self.tasks()
        logger.info(
            f"Scanning {len(tasks)} interval pairs in [1, {self.config.n_max}], "
            f"lengths {self.config.lengths}, parity {self.config.parity.value}"
        )
        if self.config.workers > 1:
            with ProcessPoolExecutor(max_workers=self.config.workers) as pool:
                rows = list(tqdm(pool.map(scan_pair, tasks, chunksize=256), total=len(tasks),
                                 disable=not self.config.progress, desc="scan"))
        else:
            rows = [scan_pair(task) for task in tqdm(tasks, disable=not self.config.progress, desc="scan")]

        result = ScanResult(self.config, rows, summarize(rows))
        logger.info(f"Scan done: {result.summary.failures} failures among {len(rows)} pairs")
        return result


def summarize(rows: Sequence[ScanRow]) -> ScanSummary:
    failing = [row.length for row in rows if row.failed]
    return ScanSummary(
        pairs=len(rows),
        failures=len(failing),
        parity_split_failures=sum(1 for row in rows if row.parity_split_ok is False),
        largest_failure_length=max(failing) if failing else None,
    )
