"""Shared fixtures and hypothesis profiles."""

import os

import hypothesis
import pytest

from coprimatch.config import SieveSettings
from coprimatch.number_theory import build_sieve

hypothesis.settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis.settings.register_profile("dev", max_examples=50, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "dev"))


@pytest.fixture(scope="session")
def sieve():
    """Factor sieve covering every value the unit tests touch."""
    return build_sieve(200_000, SieveSettings())


@pytest.fixture(scope="session")
def large_sieve():
    """Sieve to 10^6 for the full-size sweeps."""
    return build_sieve(1_000_000, SieveSettings())
