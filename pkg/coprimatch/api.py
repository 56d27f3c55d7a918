"""
Simple, user-facing API for coprimatch.

Convenience entry points that accept plain strings and lists, plus the
tabular and JSON writers the CLI uses.
"""

from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO, Union
import json
import math

import pandas as pd

from coprimatch.coprime_matcher import MatchOutcome, find_coprime_matching
from coprimatch.intervals import Progression
from coprimatch.jacobsthal import GapWitness
from coprimatch.lemma_lab import LemmaReport
from coprimatch.lonely_runner import RunnerInstance, RunnerVerdict, check_lonely
from coprimatch.number_theory import format_number
from coprimatch.scan import SCAN_COLUMNS, ScanRow, ScanSummary

TABLE_VERSION = 1

ProgressionLike = Union[str, Progression]


def _progression(value: ProgressionLike) -> Progression:
    return value if isinstance(value, Progression) else Progression.parse(value)


def match_intervals(
    left: ProgressionLike, right: ProgressionLike, allow_defect: bool = False
) -> MatchOutcome:
    """
    Coprime matching of two progressions given as "start:length[:step]" strings.

    Example:
        >>> outcome = match_intervals("1:4", "5:4")
        >>> outcome.defect
        0
    """
    return find_coprime_matching(_progression(left), _progression(right), allow_defect=allow_defect)


def lonely_runner(velocities: Union[str, Sequence[int]]) -> RunnerVerdict:
    """Exact lonely runner verdict for "1,2,3" or [1, 2, 3]."""
    if isinstance(velocities, str):
        instance = RunnerInstance.parse(velocities)
    else:
        instance = RunnerInstance.of(velocities)
    return check_lonely(instance)


def scan_rows_to_dataframe(rows: Iterable[ScanRow]) -> pd.DataFrame:
    """One row per interval pair, columns in SCAN_COLUMNS order."""
    df = pd.DataFrame([row.to_dict() for row in rows], columns=SCAN_COLUMNS)
    # keep the three-state flag (None when the parity split does not apply)
    df["parity_split_ok"] = df["parity_split_ok"].astype(object)
    return df


def gap_witnesses_to_dataframe(witnesses: Iterable[GapWitness]) -> pd.DataFrame:
    rows = []
    for witness in witnesses:
        rows.append(
            {
                "n": witness.modulus,
                "run_start": witness.run_start,
                "run_length": witness.run_length,
                "log_n": math.log(witness.modulus),
                "primorial": witness.primorial,
            }
        )
    return pd.DataFrame(rows, columns=["n", "run_start", "run_length", "log_n", "primorial"])


def lemma_reports_to_dataframe(reports: Iterable[LemmaReport]) -> pd.DataFrame:
    """Batch form of lemma reports: (lemma, m, lhs, rhs, verdict)."""
    rows = [
        {
            "lemma": report.lemma,
            "m": report.m,
            "lhs": format_number(report.lhs),
            "rhs": format_number(report.rhs),
            "verdict": report.verdict,
        }
        for report in reports
    ]
    return pd.DataFrame(rows, columns=["lemma", "m", "lhs", "rhs", "verdict"])


def runner_verdicts_to_dataframe(verdicts: Iterable[RunnerVerdict]) -> pd.DataFrame:
    rows = [
        {
            "velocities": str(verdict.instance),
            "best_t": format_number(verdict.best_t),
            "achieved": format_number(verdict.achieved),
            "target": format_number(verdict.target),
            "lonely": verdict.lonely,
        }
        for verdict in verdicts
    ]
    return pd.DataFrame(rows, columns=["velocities", "best_t", "achieved", "target", "lonely"])


def write_table(
    df: pd.DataFrame,
    table: str,
    stream: TextIO,
    summary: Optional[Dict[str, Any]] = None,
) -> None:
    """
    CSV with a versioned header comment, e.g. "# coprimatch scan v1: length,left,...".

    A summary, when given, is appended as a trailing comment line.
    """
    stream.write(f"# coprimatch {table} v{TABLE_VERSION}: {','.join(str(c) for c in df.columns)}\n")
    df.to_csv(stream, index=False, lineterminator="\n")
    if summary is not None:
        fields = " ".join(f"{key}={summary[key]}" for key in sorted(summary))
        stream.write(f"# summary {fields}\n")


def write_json(payload: Any, stream: TextIO) -> None:
    """Deterministic JSON: sorted keys, two-space indent, trailing newline."""
    json.dump(payload, stream, sort_keys=True, indent=2, default=format_number)
    stream.write("\n")


def export_scan(rows: List[ScanRow], summary: ScanSummary, filepath: str, format: str = "csv") -> None:
    """
    Export scan rows to a file.

    Args:
        rows: rows from IntervalScanPipeline.run()
        summary: the matching ScanSummary
        filepath: Output file path
        format: "csv" or "json"
    """
    with open(filepath, "w", encoding="utf-8", newline="") as fh:
        if format == "csv":
            write_table(scan_rows_to_dataframe(rows), "scan", fh, summary.to_dict())
        elif format == "json":
            write_json({"rows": [row.to_dict() for row in rows], "summary": summary.to_dict()}, fh)
        else:
            raise ValueError(f"Unsupported format: {format}")
