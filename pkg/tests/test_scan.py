"""
Tests for the interval-pair scan pipeline.
"""

import pytest

from coprimatch.errors import CapacityError, DomainError
from coprimatch.scan import (
    IntervalScanPipeline,
    ParityFilter,
    ScanConfig,
    parse_lengths,
    scan_pair,
    summarize,
)


def test_parse_lengths():
    assert parse_lengths("8") == [8]
    assert parse_lengths("4,2") == [2, 4]
    assert parse_lengths("4-6,5") == [4, 5, 6]
    for bad in ["x", "0", "", "3-a"]:
        with pytest.raises(DomainError):
            parse_lengths(bad)


def test_parity_filter():
    assert ParityFilter.OPPOSITE.accepts(1, 2)
    assert not ParityFilter.OPPOSITE.accepts(1, 3)
    assert ParityFilter.SAME_ODD.accepts(1, 3)
    assert ParityFilter.SAME_EVEN.accepts(2, 4)
    assert not ParityFilter.SAME_EVEN.accepts(1, 3)


def test_scan_pair_failure_row():
    """[14, 15] vs [20, 21] fails with the isolated-column witness."""
    row = scan_pair((2, 14, 20))
    assert not row.direct_ok
    assert row.parity_split_ok is False
    assert row.defect == 2
    assert row.witness_S == "14 15"
    assert row.witness_T == "20"
    assert row.parity == "same-even"


def test_scan_pair_parity_not_applicable():
    """Odd length with same-parity starts has no parity split."""
    row = scan_pair((3, 1, 5))
    assert row.parity_split_ok is None
    assert row.direct_ok
    assert row.witness_S == ""


def test_count_pairs_and_budget():
    pipeline = IntervalScanPipeline(ScanConfig(n_max=10, lengths=[2]))
    assert pipeline.count_pairs() == 45
    assert len(pipeline.tasks()) == 45
    with pytest.raises(CapacityError):
        IntervalScanPipeline(ScanConfig(n_max=21, lengths=[2], max_pairs=10)).tasks()


def test_exhaustive_scan_finds_known_failure():
    result = IntervalScanPipeline(ScanConfig(n_max=21, lengths=[2])).run()
    assert result.summary.pairs == len(result.rows) == 210
    failures = result.failures()
    assert result.summary.failures == len(failures)
    assert any(row.left == 14 and row.right == 20 for row in failures)
    for row in failures:
        assert row.witness_S and row.witness_T
    assert result.summary.largest_failure_length == 2
    assert all(row.left <= row.right for row in result.rows)


def test_parity_filter_restricts_rows():
    result = IntervalScanPipeline(ScanConfig(n_max=15, lengths=[3], parity=ParityFilter.OPPOSITE)).run()
    assert result.rows
    assert {row.parity for row in result.rows} == {"opposite"}
    assert all(row.parity_split_ok is not None for row in result.rows)


def test_sampled_scan_is_deterministic():
    config = ScanConfig(n_max=500, lengths=[4, 6], samples=30, seed=11)
    first = IntervalScanPipeline(config).run()
    second = IntervalScanPipeline(config).run()
    assert len(first.rows) == 30
    assert [row.to_dict() for row in first.rows] == [row.to_dict() for row in second.rows]


def test_workers_preserve_order():
    config = ScanConfig(n_max=16, lengths=[2, 3])
    serial = IntervalScanPipeline(config).run()
    parallel = IntervalScanPipeline(ScanConfig(n_max=16, lengths=[2, 3], workers=2)).run()
    assert [row.to_dict() for row in serial.rows] == [row.to_dict() for row in parallel.rows]


def test_summarize_empty():
    summary = summarize([])
    assert summary.pairs == 0
    assert summary.largest_failure_length is None


def test_pipeline_rejects_bad_config():
    with pytest.raises(DomainError):
        IntervalScanPipeline(ScanConfig(n_max=0, lengths=[2]))
    with pytest.raises(DomainError):
        IntervalScanPipeline(ScanConfig(n_max=10, lengths=[]))
