"""
Tests for bipartite graphs, Hopcroft-Karp, Koenig covers and Hall witnesses.
"""

from itertools import combinations
from math import gcd
import random

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

import coprimatch.matching as cm
from coprimatch.errors import DomainError, InconsistencyError
from coprimatch.intervals import Progression


progressions = st.builds(
    Progression,
    start=st.integers(min_value=1, max_value=300),
    length=st.integers(min_value=1, max_value=9),
    step=st.sampled_from([1, 2]),
)

small_progressions = st.builds(
    Progression,
    start=st.integers(min_value=1, max_value=300),
    length=st.integers(min_value=1, max_value=5),
    step=st.sampled_from([1, 2]),
)


def _scipy_matching_size(graph):
    dense = np.zeros((graph.n_left, graph.n_right), dtype=np.int8)
    for i in range(graph.n_left):
        for j in graph.neighbors(i):
            dense[i, j] = 1
    matched = maximum_bipartite_matching(csr_matrix(dense), perm_type="column")
    return int(np.count_nonzero(matched >= 0))


def _brute_cross_independent(graph):
    best = 0
    for a in range(1, graph.n_left + 1):
        for S in combinations(range(graph.n_left), a):
            for b in range(1, graph.n_right + 1):
                for T in combinations(range(graph.n_right), b):
                    if a + b > best and not any(graph.has_edge(i, j) for i in S for j in T):
                        best = a + b
    return best


def test_build_graph_relations(sieve):
    """[14, 15] vs [20, 21]: no coprime edge, a single 2-coprime edge 14-20."""
    left, right = Progression.interval(14, 15), Progression.interval(20, 21)
    coprime = cm.build_graph(left, right, cm.Relation.COPRIME, sieve)
    assert coprime.edge_count() == 0
    two = cm.build_graph(left, right, cm.Relation.TWO_COPRIME, sieve)
    assert two.edge_count() == 1
    assert two.has_edge(0, 0)
    assert list(two.non_edges()) == [(0, 1), (1, 0), (1, 1)]


@given(progressions, progressions, st.sampled_from(list(cm.Relation)))
def test_edges_agree_with_gcd(left, right, relation):
    """Sieve-derived bitsets agree with direct gcd evaluation."""
    graph = cm.build_graph(left, right, relation)
    for i, a in enumerate(left):
        for j, b in enumerate(right):
            assert graph.has_edge(i, j) == relation.holds(a, b)
    for j in range(graph.n_right):
        assert graph.columns[j] == sum(1 << i for i in range(graph.n_left) if graph.has_edge(i, j))


def test_relation_holds():
    assert cm.Relation.COPRIME.holds(9, 10)
    assert not cm.Relation.COPRIME.holds(6, 10)
    assert cm.Relation.TWO_COPRIME.holds(6, 10)
    assert gcd(6, 10) == 2


def test_max_matching_perfect(sieve):
    """[1..4] vs [5..8] has a coprime perfect matching."""
    graph = cm.build_graph(Progression(1, 4), Progression(5, 4), sieve=sieve)
    result = cm.max_matching(graph)
    assert result.size == 4
    assert result.is_perfect
    for a, b in result.value_pairs():
        assert gcd(a, b) == 1
    assert sorted(i for i, _ in result.pairs) == [0, 1, 2, 3]
    assert sorted(j for _, j in result.pairs) == [0, 1, 2, 3]


@given(progressions, progressions)
def test_max_matching_matches_scipy(left, right):
    """Matching size agrees with scipy's maximum_bipartite_matching."""
    graph = cm.build_graph(left, right)
    result = cm.max_matching(graph)
    assert result.size == _scipy_matching_size(graph)
    assert len({i for i, _ in result.pairs}) == result.size
    assert len({j for _, j in result.pairs}) == result.size
    assert all(graph.has_edge(i, j) for i, j in result.pairs)


@given(progressions, progressions, st.sampled_from(list(cm.Relation)))
def test_cover_size_equals_matching(left, right, relation):
    """Koenig: the cover has the size of the maximum matching and meets every edge."""
    graph = cm.build_graph(left, right, relation)
    result = cm.max_matching(graph)
    cover_left, cover_right = cm.min_vertex_cover(graph, result)
    assert len(cover_left) + len(cover_right) == result.size
    for i in range(graph.n_left):
        for j in graph.neighbors(i):
            assert i in cover_left or j in cover_right


def test_cover_rejects_non_maximum_matching(sieve):
    graph = cm.build_graph(Progression(1, 4), Progression(5, 4), sieve=sieve)
    empty = cm.MatchingResult(graph.left_values, graph.right_values, [], 0)
    with pytest.raises(InconsistencyError):
        cm.min_vertex_cover(graph, empty)


def test_cover_rejects_non_edges(sieve):
    graph = cm.build_graph(Progression(2, 2), Progression(4, 2), sieve=sieve)
    # 2 and 4 are not coprime
    bogus = cm.MatchingResult(graph.left_values, graph.right_values, [(0, 0)], 1)
    with pytest.raises(InconsistencyError):
        cm.min_vertex_cover(graph, bogus)


def test_max_cross_independent_examples(sieve):
    """Reference values, including the complete and the empty graph."""
    two = cm.build_graph(
        Progression.interval(14, 15), Progression.interval(20, 21), cm.Relation.TWO_COPRIME, sieve
    )
    cross = cm.max_cross_independent(two)
    assert cross.value == 3
    assert cross.S == [1] and cross.T == [0, 1]

    complete = cm.build_graph(Progression(1, 1), Progression(2, 2), sieve=sieve)
    cross = cm.max_cross_independent(complete)
    assert cross.value == 0 and cross.S is None and cross.T is None

    empty = cm.build_graph(Progression(2, 2, 2), Progression(6, 2, 2), sieve=sieve)
    assert cm.max_cross_independent(empty).value == 4


@given(small_progressions, small_progressions, st.sampled_from(list(cm.Relation)))
def test_max_cross_independent_matches_brute_force(left, right, relation):
    """Optimal nonempty edge-free pair, against subset enumeration."""
    graph = cm.build_graph(left, right, relation)
    cross = cm.max_cross_independent(graph)
    assert cross.value == _brute_cross_independent(graph)
    if cross.value:
        assert cm.validate_witness(graph, cross.S, cross.T)
        assert len(cross.S) + len(cross.T) == cross.value


def test_hall_witness_isolated_column(sieve):
    """No coprime edges at all: the whole left side against the first right vertex."""
    graph = cm.build_graph(Progression.interval(14, 15), Progression.interval(20, 21), sieve=sieve)
    result = cm.hall_witness(graph, cm.max_matching(graph))
    assert result.witness == ([0, 1], [0])
    assert result.to_dict()["witness"] == {"S": [0, 1], "T": [0]}


def test_hall_witness_perfect_matching_has_none(sieve):
    graph = cm.build_graph(Progression(1, 4), Progression(5, 4), sieve=sieve)
    assert cm.hall_witness(graph, cm.max_matching(graph)).witness is None


@given(progressions, st.integers(min_value=1, max_value=300))
def test_hall_witness_is_deficient(left, right_start):
    """|S| + |T| > m and no coprime pair between S and T whenever the matching is not perfect."""
    right = Progression(right_start, len(left), left.step)
    graph = cm.build_graph(left, right)
    result = cm.hall_witness(graph, cm.max_matching(graph))
    if result.is_perfect:
        assert result.witness is None
    else:
        S, T = result.witness
        assert len(S) + len(T) > len(left)
        assert cm.validate_witness(graph, S, T)


def test_verify_proposition_examples(sieve):
    assert cm.verify_proposition(Progression(3, 3, 2), Progression(9, 3, 2), sieve).holds
    assert cm.verify_proposition(Progression(1, 2), Progression(3, 2), sieve).holds

    verdict = cm.verify_proposition(Progression.interval(14, 15), Progression.interval(20, 21), sieve)
    assert not verdict.holds
    assert verdict.max_cross_value == 3
    assert verdict.witness_left == [15]
    assert verdict.witness_right == [20, 21]
    assert verdict.to_dict()["witness"] == {"S": [15], "T": [20, 21]}


def test_verify_proposition_needs_equal_lengths(sieve):
    with pytest.raises(DomainError):
        cm.verify_proposition(Progression(1, 3), Progression(5, 4), sieve)


@given(small_progressions, small_progressions)
def test_koenig_duality_with_empty_sides(left, right):
    """Matching size plus the largest edge-free pair (empty sides allowed) is |I| + |J|."""
    graph = cm.build_graph(left, right)
    best = max(graph.n_left, graph.n_right, _brute_cross_independent(graph))
    assert cm.max_matching(graph).size + best == graph.n_left + graph.n_right


def _edge_free_optimum(graph):
    """Largest |S| + |T| with no edge between S and T: all pairs, and those with both sides nonempty."""
    rows = [sum(1 << j for j in graph.neighbors(i)) for i in range(graph.n_left)]
    full = (1 << graph.n_right) - 1
    reach = [0] * (1 << graph.n_left)
    any_pair = graph.n_right
    both_nonempty = 0
    for mask in range(1, 1 << graph.n_left):
        low = mask & -mask
        reach[mask] = reach[mask ^ low] | rows[low.bit_length() - 1]
        free = bin(full & ~reach[mask]).count("1")
        size = bin(mask).count("1") + free
        any_pair = max(any_pair, size)
        if free:
            both_nonempty = max(both_nonempty, size)
    return any_pair, both_nonempty


@pytest.mark.slow
def test_koenig_duality_random_graphs(sieve):
    """10^4 seeded progression pairs with sides up to 12."""
    rng = random.Random(7)
    for _ in range(10_000):
        step = rng.choice([1, 2])
        left = Progression(rng.randint(1, 100_000), rng.randint(1, 12), step)
        right = Progression(rng.randint(1, 100_000), rng.randint(1, 12), step)
        relation = rng.choice(list(cm.Relation))
        graph = cm.build_graph(left, right, relation, sieve)
        any_pair, both_nonempty = _edge_free_optimum(graph)
        assert cm.max_matching(graph).size + any_pair == graph.n_left + graph.n_right
        assert cm.max_cross_independent(graph).value == both_nonempty


@pytest.mark.slow
def test_proposition_gives_perfect_two_coprime_matching(sieve):
    """Whenever the proposition holds the 2-coprime graph has a perfect matching."""
    for length in range(1, 7):
        for step in (1, 2):
            for a in range(1, 24):
                for b in range(1, 24):
                    left, right = Progression(a, length, step), Progression(b, length, step)
                    verdict = cm.verify_proposition(left, right, sieve)
                    graph = cm.build_graph(left, right, cm.Relation.TWO_COPRIME, sieve)
                    if verdict.holds:
                        assert cm.max_matching(graph).is_perfect, (a, b, length, step)
