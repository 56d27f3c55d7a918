"""
Configuration for coprimatch.

Two layers:
- SieveSettings: process-wide sieve sizing, read from the environment
- RunConfig: validated settings of a single CLI run, optionally loaded from YAML

Identical RunConfig values (seed included) must produce identical output.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional
import logging
import os

import yaml
from pydantic import BaseModel, Field, field_validator

from coprimatch.errors import CapacityError


logger = logging.getLogger(__name__)

SIEVE_LIMIT_ENV = "COPRIMATCH_SIEVE_LIMIT"
SIEVE_BUDGET_ENV = "COPRIMATCH_SIEVE_BUDGET"

DEFAULT_SIEVE_LIMIT = 1_000_000
DEFAULT_SIEVE_BUDGET = 50_000_000  # int32 table: ~200 MB

SUBCOMMANDS = (
    "match",
    "verify-prop",
    "lemmas",
    "jacobsthal",
    "erdos-scan",
    "runner",
    "runner-scan",
    "scan",
)


def _read_int_env(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw.replace("_", ""))
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={raw!r}; using {default}")
        return default


@dataclass(frozen=True)
class SieveSettings:
    """Sizing of the shared factor sieve."""
    default_limit: int = DEFAULT_SIEVE_LIMIT
    max_limit: int = DEFAULT_SIEVE_BUDGET

    def __post_init__(self):
        if self.max_limit < 2:
            raise CapacityError(f"Sieve budget must be at least 2, got {self.max_limit}")

    @classmethod
    def from_env(cls) -> "SieveSettings":
        """Build settings from COPRIMATCH_SIEVE_LIMIT / COPRIMATCH_SIEVE_BUDGET."""
        budget = _read_int_env(SIEVE_BUDGET_ENV, DEFAULT_SIEVE_BUDGET)
        limit = _read_int_env(SIEVE_LIMIT_ENV, DEFAULT_SIEVE_LIMIT)
        return cls(default_limit=min(limit, budget), max_limit=budget)

    def check(self, limit: int) -> None:
        """Raise CapacityError unless 2 <= limit <= max_limit."""
        if limit < 2:
            raise CapacityError(f"Sieve limit must be at least 2, got {limit}")
        if limit > self.max_limit:
            raise CapacityError(
                f"Sieve limit {limit} exceeds the configured budget {self.max_limit} "
                f"(set {SIEVE_BUDGET_ENV} to raise it)"
            )


class OutputFormat(str, Enum):
    """Output encodings of the CLI."""
    JSON = "json"
    CSV = "csv"
    TEXT = "text"


class RunConfig(BaseModel):
    """Validated configuration of one CLI invocation."""
    subcommand: str
    sieve_limit: int = Field(default_factory=lambda: SieveSettings.from_env().default_limit)
    output_format: OutputFormat = OutputFormat.JSON
    seed: int = 0
    workers: int = 1
    progress: bool = False

    @field_validator("subcommand")
    @classmethod
    def _known_subcommand(cls, value: str) -> str:
        if value not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {value!r}")
        return value

    @field_validator("sieve_limit")
    @classmethod
    def _sieve_in_budget(cls, value: int) -> int:
        SieveSettings.from_env().check(value)
        return value

    @field_validator("seed")
    @classmethod
    def _seed_is_u64(cls, value: int) -> int:
        if not 0 <= value < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        return value

    @field_validator("workers")
    @classmethod
    def _positive_workers(cls, value: int) -> int:
        if value < 1:
            raise ValueError("workers must be at least 1")
        return value

    @classmethod
    def from_sources(
        cls,
        subcommand: str,
        config_path: Optional[str] = None,
        overrides: Optional[Dict[str, Any]] = None,
    ) -> "RunConfig":
        """
        Merge a YAML file (if given) with explicit overrides.

        Keys set to None in ``overrides`` do not replace file values.
        """
        data: Dict[str, Any] = {}
        if config_path:
            with open(config_path, "r", encoding="utf-8") as fh:
                loaded = yaml.safe_load(fh) or {}
            if not isinstance(loaded, dict):
                raise ValueError(f"{config_path}: expected a mapping at top level")
            data.update(loaded)
        for key, value in (overrides or {}).items():
            if value is not None:
                data[key] = value
        data["subcommand"] = subcommand
        return cls(**data)
