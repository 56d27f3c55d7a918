"""
Intervals and arithmetic progressions with common difference 1 or 2.

A Progression is stored as (start, length, step) and only materialized at API
boundaries. Text form is "start:length[:step]".
"""

from dataclasses import dataclass
from typing import Iterator, List, Tuple

from coprimatch.errors import DomainError


@dataclass(frozen=True)
class Progression:
    """
    start, start + step, ..., start + (length - 1) * step.

    Length 0 is accepted only so that a parity split of a length-1 interval
    can return its empty half.
    """
    start: int
    length: int
    step: int = 1

    def __post_init__(self):
        if self.step not in (1, 2):
            raise DomainError(f"step must be 1 or 2, got {self.step}")
        if self.start < 1:
            raise DomainError(f"progressions hold positive integers, start={self.start}")
        if self.length < 0:
            raise DomainError(f"negative length {self.length}")

    @classmethod
    def parse(cls, text: str) -> "Progression":
        """Parse "start:length" or "start:length:step"."""
        parts = text.strip().split(":")
        if len(parts) not in (2, 3):
            raise DomainError(f"expected start:length[:step], got {text!r}")
        try:
            numbers = [int(part) for part in parts]
        except ValueError:
            raise DomainError(f"non-integer field in progression {text!r}") from None
        if numbers[1] < 1:
            raise DomainError(f"progression length must be positive in {text!r}")
        return cls(*numbers)

    @classmethod
    def interval(cls, first: int, last: int) -> "Progression":
        """The interval [first, last]."""
        return cls(first, last - first + 1, 1)

    def __str__(self) -> str:
        if self.step == 1:
            return f"{self.start}:{self.length}"
        return f"{self.start}:{self.length}:{self.step}"

    def __len__(self) -> int:
        return self.length

    def __iter__(self) -> Iterator[int]:
        return iter(self.as_range())

    def __contains__(self, value: object) -> bool:
        return value in self.as_range()

    def as_range(self) -> range:
        return range(self.start, self.start + self.length * self.step, self.step)

    def elements(self) -> List[int]:
        return list(self.as_range())

    def max_in(self) -> int:
        if self.length == 0:
            raise DomainError("empty progression has no maximum")
        return self.start + (self.length - 1) * self.step

    def contained_in(self, n: int) -> bool:
        """Whether every element is <= n, i.e. the progression lies in [n]."""
        return self.length == 0 or self.max_in() <= n

    def index_of(self, value: int) -> int:
        offset = value - self.start
        if offset < 0 or offset % self.step or offset // self.step >= self.length:
            raise DomainError(f"{value} is not an element of {self}")
        return offset // self.step

    def parity_split(self) -> Tuple["Progression", "Progression"]:
        """
        Split a step-1 progression into (evens, odds), both with step 2.

        For even length 2m both halves have length m; for odd length the half
        matching the parity of ``start`` gets the extra element.
        """
        if self.step != 1:
            raise DomainError("parity_split needs step 1; a step-2 progression has one parity")
        first_len = (self.length + 1) // 2
        second_len = self.length // 2
        if self.start % 2 == 0:
            evens = Progression(self.start, first_len, 2)
            odds = Progression(self.start + 1, second_len, 2)
        else:
            odds = Progression(self.start, first_len, 2)
            evens = Progression(self.start + 1, second_len, 2)
        return evens, odds
