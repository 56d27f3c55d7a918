"""
Tests for the Jacobsthal function and the non-coprime run search.
"""

from math import gcd, log

import pytest

from coprimatch.errors import DomainError
from coprimatch.jacobsthal import (
    GapWitness,
    erdos_witness_search,
    jacobsthal_g,
    longest_noncoprime_run,
    primorials,
)


def _naive_g(k):
    """Longest gap between consecutive integers coprime to k, over two periods."""
    coprime = [x for x in range(1, 2 * k + 2) if gcd(x, k) == 1]
    return max(b - a for a, b in zip(coprime, coprime[1:]))


def _naive_run(n):
    best_start, best_len, start, length = 1, 0, None, 0
    for x in range(1, n + 1):
        if gcd(x, n) > 1:
            if length == 0:
                start = x
            length += 1
            if length > best_len:
                best_start, best_len = start, length
        else:
            length = 0
    return best_start, best_len


def test_jacobsthal_examples():
    assert jacobsthal_g(1) == 1
    assert jacobsthal_g(2) == 2
    assert jacobsthal_g(6) == 4
    assert jacobsthal_g(30) == 6
    assert jacobsthal_g(210) == 10


def test_jacobsthal_depends_on_radical():
    assert jacobsthal_g(12) == jacobsthal_g(6)
    assert jacobsthal_g(2**5 * 3**3) == 4


def test_jacobsthal_matches_naive_scan():
    for k in range(2, 2001):
        assert jacobsthal_g(k) == _naive_g(k)


def test_jacobsthal_rejects_nonpositive():
    with pytest.raises(DomainError):
        jacobsthal_g(0)


def test_longest_run_examples():
    """30: 2, 3, 4, 5, 6 all share a factor with 30."""
    witness = longest_noncoprime_run(30)
    assert (witness.run_start, witness.run_length) == (2, 5)
    assert witness.run_end == 6
    assert witness.validate()
    witness = longest_noncoprime_run(4)
    assert (witness.run_start, witness.run_length) == (2, 1)


def test_longest_run_matches_naive():
    for n in range(2, 600):
        witness = longest_noncoprime_run(n)
        assert (witness.run_start, witness.run_length) == _naive_run(n)


def test_longest_run_needs_n_two():
    with pytest.raises(DomainError):
        longest_noncoprime_run(1)


def test_primorials():
    assert primorials(1000) == [2, 6, 30, 210]
    assert primorials(1) == []


def test_erdos_search_small_limit():
    """Every hit has a validated run of length at least log n, in ascending order."""
    hits = erdos_witness_search(2000)
    assert hits
    assert [w.modulus for w in hits] == sorted(w.modulus for w in hits)
    for witness in hits:
        assert witness.validate()
        assert witness.run_length >= log(witness.modulus)
    flagged = {w.modulus for w in hits if w.primorial}
    assert flagged <= {2, 6, 30, 210}
    assert {6, 30, 210} <= {w.modulus for w in hits}
    assert 30 in flagged


def test_erdos_search_is_exhaustive():
    """No n missing: the hit set equals the naive filter."""
    limit = 700
    expected = [n for n in range(2, limit + 1) if _naive_run(n)[1] >= log(n)]
    assert [w.modulus for w in erdos_witness_search(limit, chunk_size=97)] == expected


def test_erdos_search_workers_agree():
    assert erdos_witness_search(1500, workers=2) == erdos_witness_search(1500)


def test_gap_witness_to_dict():
    payload = GapWitness(30, 2, 5, primorial=True).to_dict()
    assert payload == {"n": 30, "run_start": 2, "run_length": 5, "primorial": True}
    assert not GapWitness(30, 1, 2).validate()


def test_erdos_search_ten_thousand():
    hits = erdos_witness_search(10_000)
    assert all(w.validate() for w in hits)
    by_n = {w.modulus: w for w in hits}
    assert by_n[30].run_length == 5


def test_longest_run_is_one_short_of_g():
    """A run of non-coprime integers sits strictly between two consecutive coprime ones."""
    for n in range(2, 2001):
        assert longest_noncoprime_run(n).run_length == jacobsthal_g(n) - 1


def test_jacobsthal_monotone_under_divisibility():
    chain = [2, 6, 30, 210, 2310, 30030]
    values = [jacobsthal_g(k) for k in chain]
    assert values == sorted(values)
    divisors = [d for d in range(1, 30031) if 30030 % d == 0]
    assert len(divisors) == 64
    for d in divisors:
        for e in divisors:
            if e % d == 0:
                assert jacobsthal_g(d) <= jacobsthal_g(e), (d, e)
