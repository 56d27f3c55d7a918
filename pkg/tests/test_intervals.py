"""
Tests for progressions.
"""

import pytest

from coprimatch.errors import DomainError
from coprimatch.intervals import Progression


def test_parse_and_format():
    """Text form round-trips through parse and str."""
    assert Progression.parse("5:4") == Progression(5, 4, 1)
    assert Progression.parse("3:3:2") == Progression(3, 3, 2)
    assert str(Progression(5, 4)) == "5:4"
    assert str(Progression(3, 3, 2)) == "3:3:2"


@pytest.mark.parametrize("text", ["5", "a:3", "1:0", "1:2:3", "0:4", "1:2:2:2"])
def test_parse_rejects_malformed(text):
    with pytest.raises(DomainError):
        Progression.parse(text)


def test_elements_and_membership():
    prog = Progression(3, 4, 2)
    assert prog.elements() == [3, 5, 7, 9]
    assert 7 in prog and 8 not in prog and 11 not in prog
    assert prog.max_in() == 9
    assert prog.index_of(7) == 2
    with pytest.raises(DomainError):
        prog.index_of(8)


def test_interval_constructor():
    assert Progression.interval(14, 15).elements() == [14, 15]
    assert len(Progression.interval(1, 10)) == 10


def test_contained_in():
    assert Progression(1, 10).contained_in(10)
    assert not Progression(1, 10).contained_in(9)


def test_parity_split_even_length():
    """Both halves of an even-length interval have half its length."""
    evens, odds = Progression(5, 6).parity_split()
    assert evens.elements() == [6, 8, 10]
    assert odds.elements() == [5, 7, 9]


def test_parity_split_odd_length():
    """The parity of the start gets the extra element."""
    evens, odds = Progression(4, 5).parity_split()
    assert evens.elements() == [4, 6, 8]
    assert odds.elements() == [5, 7]
    evens, odds = Progression(1, 1).parity_split()
    assert evens.elements() == []
    assert odds.elements() == [1]


def test_parity_split_needs_step_one():
    with pytest.raises(DomainError):
        Progression(1, 4, 2).parity_split()
