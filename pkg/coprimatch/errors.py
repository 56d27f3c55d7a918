"""
Exception hierarchy for coprimatch.

Every error derives from a built-in (ValueError or RuntimeError) so callers
that only catch the built-ins keep working.
"""


class CoprimatchError(Exception):
    """Base class for all coprimatch errors."""


class CapacityError(CoprimatchError, ValueError):
    """A requested computation exceeds a configured budget (sieve memory, candidates)."""


class SieveRangeError(CoprimatchError, ValueError):
    """An argument lies outside the range covered by a sieve."""


class DomainError(CoprimatchError, ValueError):
    """An operation was called outside its mathematical domain."""


class InconsistencyError(CoprimatchError, RuntimeError):
    """A supplied or computed certificate failed re-validation."""
