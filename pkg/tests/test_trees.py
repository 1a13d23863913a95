import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chisquare

from momst.graph import Graph, GraphError, NoSpanningTreeError, SpanningTree
from momst.trees import (EnumerationTooLarge, InvalidCodeError, enumerate_pareto_set,
                         enumerate_spanning_trees, prufer_decode, prufer_encode, random_spanning_tree)

from conftest import all_subsets_trees, brute_pareto, random_complete


def test_decode_examples():
    assert prufer_decode([3], 3).pairs() == [(1, 3), (2, 3)]
    assert prufer_decode([1, 1], 4).pairs() == [(1, 2), (1, 3), (1, 4)]
    assert prufer_decode([], 2).pairs() == [(1, 2)]


def test_encode_examples():
    star = prufer_decode([1, 1], 4)
    assert prufer_encode(star) == [1, 1]
    path = SpanningTree.from_pairs(Graph.complete_graph(3), [(1, 2), (2, 3)])
    assert prufer_encode(path) == [2]


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_prufer_bijection_exhaustive(n):
    seen = set()
    for code in itertools.product(range(1, n + 1), repeat=n - 2):
        t = prufer_decode(code, n)
        assert t.is_valid()
        assert prufer_encode(t) == list(code)
        seen.add(tuple(t.edges))
    assert len(seen) == n ** (n - 2)


@settings(max_examples=100)
@given(st.integers(3, 8).flatmap(lambda n: st.tuples(st.just(n), st.lists(
    st.integers(1, n), min_size=n - 2, max_size=n - 2))))
def test_encode_decode_roundtrip(data):
    n, code = data
    assert prufer_encode(prufer_decode(code, n)) == code


def test_decode_rejects_bad_codes():
    with pytest.raises(InvalidCodeError):
        prufer_decode([5], 3)
    with pytest.raises(InvalidCodeError):
        prufer_decode([1, 1], 3)
    with pytest.raises(GraphError):
        prufer_decode([1], 3, Graph(3, [(1, 2, 1, 1), (2, 3, 1, 1)]))


def test_broder_support_and_chi_square():
    g = Graph.complete_graph(3)
    rng = np.random.default_rng(1)
    counts = Counter(tuple(random_spanning_tree(g, rng).edges) for _ in range(3000))
    assert len(counts) == 3
    assert chisquare(list(counts.values())).pvalue > 0.001


def test_broder_uniform_on_k4():
    g = Graph.complete_graph(4)
    rng = np.random.default_rng(2)
    counts = Counter(tuple(random_spanning_tree(g, rng).edges) for _ in range(16000))
    assert len(counts) == 16
    assert chisquare(list(counts.values())).pvalue > 0.001


def test_broder_uniform_on_non_complete_graph():
    # K4 minus one edge: 8 spanning trees
    g = Graph(4, [(1, 2, 1, 1), (1, 3, 1, 1), (2, 3, 1, 1), (2, 4, 1, 1), (3, 4, 1, 1)])
    rng = np.random.default_rng(3)
    counts = Counter(tuple(random_spanning_tree(g, rng).edges) for _ in range(8000))
    assert len(counts) == 8
    assert chisquare(list(counts.values())).pvalue > 0.001


def test_broder_trivial_and_errors():
    assert random_spanning_tree(Graph.complete_graph(2), 0).pairs() == [(1, 2)]
    with pytest.raises(NoSpanningTreeError):
        random_spanning_tree(Graph(4, [(1, 2, 1, 1), (3, 4, 1, 1)]), 0)


@given(st.integers(0, 2**32))
@settings(max_examples=30)
def test_broder_always_valid(seed):
    g = random_complete(7, np.random.default_rng(seed % 97))
    assert random_spanning_tree(g, seed).is_valid()


def _matrix_tree_count(g):
    lap = np.zeros((g.n, g.n))
    for a, b in zip(g.eu, g.ev):
        lap[a, a] += 1
        lap[b, b] += 1
        lap[a, b] -= 1
        lap[b, a] -= 1
    return round(np.linalg.det(lap[1:, 1:]))


def test_enumeration_counts():
    assert len(enumerate_spanning_trees(Graph.complete_graph(4))) == 16
    assert len(enumerate_spanning_trees(Graph.complete_graph(5))) == 125
    cycle = Graph(4, [(1, 2, 1, 1), (2, 3, 1, 1), (3, 4, 1, 1), (1, 4, 1, 1)])
    trees = enumerate_spanning_trees(cycle)
    assert len(trees) == 4 == _matrix_tree_count(cycle)
    assert len({tuple(t.edges) for t in trees}) == 4


def test_enumeration_matches_subset_oracle():
    rng = np.random.default_rng(5)
    g = random_complete(5, rng)
    sparse = Graph.from_arrays(5, g.eu[::2], g.ev[::2], g.c1[::2], g.c2[::2])
    for graph in (g, sparse):
        got = {frozenset(t.edges.tolist()) for t in enumerate_spanning_trees(graph)}
        assert got == set(all_subsets_trees(graph))
        assert len(got) == _matrix_tree_count(graph)


def test_enumeration_guard():
    with pytest.raises(EnumerationTooLarge):
        enumerate_spanning_trees(Graph.complete_graph(10))


def test_pareto_set_matches_brute_force():
    rng = np.random.default_rng(11)
    g = random_complete(6, rng)
    front, trees = enumerate_pareto_set(g)
    costs = [t.cost.as_tuple() for t in enumerate_spanning_trees(g)]
    assert [tuple(p) for p in front.tolist()] == brute_pareto(costs)
    assert {t.cost.as_tuple() for t in trees} == set(map(tuple, front.tolist()))
    assert len(trees) == sum(c in set(map(tuple, front.tolist())) for c in costs)
