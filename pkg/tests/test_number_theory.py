"""
Tests for the sieve and arithmetic functions.
"""

from fractions import Fraction
from math import gcd
import os

import pytest
import sympy
from hypothesis import given
import hypothesis.strategies as st

from coprimatch.config import SieveSettings
from coprimatch.errors import CapacityError, DomainError, SieveRangeError
from coprimatch.number_theory import (
    build_sieve,
    check_omega_bound,
    check_phi_log_bound,
    configure_shared_sieve,
    f_value,
    factorize,
    format_number,
    lower,
    odd_part,
    odd_squarefree_part,
    omega,
    parse_rational,
    phi,
    phi_ratio,
    shared_sieve,
    squarefree_divisors,
    sweep_omega_bound,
    sweep_phi_log_bound,
    two_coprime,
    upper,
)


def test_build_sieve_small_tables():
    """Smallest prime factors for the definitional cases."""
    sieve = build_sieve(10)
    assert [int(sieve.spf[k]) for k in range(2, 11)] == [2, 3, 2, 5, 2, 7, 2, 3, 2]
    assert int(build_sieve(2).spf[2]) == 2
    sieve30 = build_sieve(30)
    assert sieve30.smallest_prime_factor(25) == 5
    assert sieve30.smallest_prime_factor(29) == 29


def test_sieve_invariants(sieve):
    """spf[k] is a prime dividing k, and spf[p] == p exactly for primes."""
    primes = set(sympy.primerange(2, 5001))
    for k in range(2, 5001):
        p = sieve.smallest_prime_factor(k)
        assert k % p == 0
        assert p in primes
        assert (p == k) == (k in primes)


def test_build_sieve_rejects_bad_limits():
    """Limits below 2 or above the budget are capacity errors."""
    with pytest.raises(CapacityError):
        build_sieve(1)
    with pytest.raises(CapacityError):
        build_sieve(101, SieveSettings(default_limit=50, max_limit=100))


def test_factorize_examples(sieve):
    """Factorizations of 360, 1 and 97."""
    assert factorize(sieve, 360).factors == ((2, 3), (3, 2), (5, 1))
    assert factorize(sieve, 1).factors == ()
    assert factorize(sieve, 97).factors == ((97, 1),)
    assert factorize(sieve, 360).product() == 360
    assert factorize(sieve, 360).omega == 3


def test_factorize_out_of_range():
    """Arguments beyond the sieve raise a range error."""
    small = build_sieve(50)
    with pytest.raises(SieveRangeError):
        factorize(small, 51)
    with pytest.raises(SieveRangeError):
        factorize(small, 0)


def test_omega_phi_examples(sieve):
    """omega, phi and phi_ratio on the reference values."""
    assert omega(12, sieve) == 2
    assert phi(12, sieve) == 4
    assert omega(1, sieve) == 0
    assert phi(1, sieve) == 1
    assert phi_ratio(30, sieve) == Fraction(15, 4)


def test_phi_matches_sympy(sieve):
    """phi and the vectorized phi table agree with sympy's totient."""
    table = sieve.phi_table(3000)
    for k in range(1, 3001):
        expected = int(sympy.totient(k))
        assert phi(k, sieve) == expected
        assert int(table[k]) == expected


def test_phi_matches_gcd_count(sieve):
    """phi against naive gcd counting."""
    for k in range(1, 400):
        assert phi(k, sieve) == sum(1 for x in range(1, k + 1) if gcd(x, k) == 1)


def test_omega_table_matches_sympy(sieve):
    """Vectorized omega table against sympy's primefactors."""
    table = sieve.omega_table(3000)
    for k in range(2, 3001):
        assert int(table[k]) == len(sympy.primefactors(k))


def test_two_coprime_examples():
    """gcd a power of two, 1 included."""
    assert two_coprime(6, 10)
    assert not two_coprime(15, 21)
    assert two_coprime(8, 16)
    assert two_coprime(7, 9)


def test_two_coprime_rejects_nonpositive():
    with pytest.raises(DomainError):
        two_coprime(0, 3)


@given(st.integers(min_value=1, max_value=10**6), st.integers(min_value=1, max_value=10**6))
def test_two_coprime_matches_odd_parts(s, t):
    """two_coprime(s, t) iff the odd parts are coprime."""
    assert two_coprime(s, t) == (gcd(odd_part(s), odd_part(t)) == 1)


def test_odd_squarefree_part_examples(sieve):
    assert odd_squarefree_part(360, 5, sieve) == 15
    assert odd_squarefree_part(360, 4, sieve) == 3
    assert odd_squarefree_part(8, 100, sieve) == 1
    assert odd_squarefree_part(1, 100, sieve) == 1


def test_odd_squarefree_part_is_maximal(sieve):
    """Largest odd squarefree divisor supported on primes <= bound, by divisor enumeration."""
    for k in range(1, 1500):
        for bound in (3, 7, 30):
            expected = 1
            for d in sympy.divisors(k):
                exponents = sympy.factorint(d)
                if d % 2 and all(p <= bound and e == 1 for p, e in exponents.items()):
                    expected = max(expected, d)
            assert odd_squarefree_part(k, bound, sieve) == expected


def test_f_value_examples(sieve):
    """f(i) sums 1/p over primes log m < p <= m dividing i."""
    assert f_value(154, 100, sieve) == Fraction(18, 77)
    assert f_value(8, 100, sieve) == 0
    assert f_value(15, 100, sieve) == Fraction(1, 5)
    assert f_value(1, 100, sieve) == 0


def test_f_value_needs_m_at_least_three(sieve):
    with pytest.raises(DomainError):
        f_value(10, 2, sieve)


def test_bound_checks_examples(sieve):
    assert check_omega_bound(12, sieve)
    assert check_phi_log_bound(15, sieve)
    assert check_phi_log_bound(3 * 5 * 7 * 11 * 13, sieve)


def test_bound_checks_preconditions(sieve):
    with pytest.raises(DomainError):
        check_omega_bound(1, sieve)
    with pytest.raises(DomainError):
        check_phi_log_bound(30, sieve)  # even
    with pytest.raises(DomainError):
        check_phi_log_bound(9, sieve)  # omega = 1


def test_bound_sweeps_find_no_violations(sieve):
    """Both explicit bounds hold throughout the sweep range."""
    assert sweep_omega_bound(100_000, sieve) == []
    assert sweep_phi_log_bound(100_000, sieve) == []


@pytest.mark.slow
def test_bound_sweeps_to_one_million(large_sieve):
    assert sweep_omega_bound(1_000_000, large_sieve) == []
    assert sweep_phi_log_bound(1_000_000, large_sieve) == []


def test_squarefree_divisors_mobius():
    """Divisors of 3*5*7 with their Moebius values."""
    pairs = dict(squarefree_divisors([3, 5, 7]))
    assert sorted(pairs) == [1, 3, 5, 7, 15, 21, 35, 105]
    assert pairs[1] == 1 and pairs[15] == 1 and pairs[105] == -1 and pairs[7] == -1
    assert list(squarefree_divisors([])) == [(1, 1)]


def test_directed_rounding_brackets_value():
    assert lower(1.5) < 1.5 < upper(1.5)


def test_format_and_parse_rationals():
    assert format_number(Fraction(1, 4)) == "1/4"
    assert format_number(Fraction(6, 3)) == 2
    assert format_number(0.5) == 0.5
    assert parse_rational("3/7") == Fraction(3, 7)
    assert parse_rational("0.25") == Fraction(1, 4)
    with pytest.raises(DomainError):
        parse_rational("one half")


def test_shared_sieve_grows_on_demand():
    """A request beyond the shared sieve rebuilds it larger."""
    configure_shared_sieve(100)
    assert shared_sieve(50).limit == 100
    assert shared_sieve(150).limit >= 150


def test_sieve_settings_from_env(mocker):
    """Environment variables size the shared sieve."""
    mocker.patch.dict(os.environ, {"COPRIMATCH_SIEVE_LIMIT": "5000", "COPRIMATCH_SIEVE_BUDGET": "8000"})
    settings = SieveSettings.from_env()
    assert settings.default_limit == 5000
    assert settings.max_limit == 8000
    with pytest.raises(CapacityError):
        settings.check(9000)


def test_sieve_settings_ignore_garbage_env(mocker):
    mocker.patch.dict(os.environ, {"COPRIMATCH_SIEVE_LIMIT": "lots"})
    assert SieveSettings.from_env().default_limit == 1_000_000
