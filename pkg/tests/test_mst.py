import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momst.graph import Graph, NoSpanningTreeError, SpanningTree, UnionFind, dominates
from momst.instances import InstanceSpec, generate
from momst.mst import ContractError, ScalarizedView, kruskal, kruskal_seeded, lambda_grid, weighted_sum_sweep
from momst.trees import enumerate_pareto_set, enumerate_tree_edges

from conftest import random_complete


def brute_min(graph, lam):
    rows = enumerate_tree_edges(graph)
    w = lam * graph.c1 + (1 - lam) * graph.c2
    return min(math.fsum(w[r]) for r in rows)


def test_fig_subgraph_kruskal(fig_graph):
    view = ScalarizedView(fig_graph, 0.5)
    t = kruskal(view, restrict_to_nodes={4, 5, 7, 8})
    assert t.pairs() == [(4, 5), (4, 8), (7, 8)]
    assert view.weight(t) == 10.0
    assert t.nodes == frozenset({4, 5, 7, 8})


def test_single_edge_graph():
    g = Graph(2, [(1, 2, 3, 4)])
    assert kruskal(ScalarizedView(g, 0.3)).pairs() == [(1, 2)]


def test_disconnected_subgraph_raises(fig_graph):
    with pytest.raises(NoSpanningTreeError):
        kruskal(ScalarizedView(fig_graph, 0.5), restrict_to_nodes={1, 9})
    with pytest.raises(NoSpanningTreeError):
        kruskal(ScalarizedView(Graph(3, [(1, 2, 1, 1)]), 0.5))


def test_lambda_range():
    with pytest.raises(ValueError):
        ScalarizedView(Graph.complete_graph(3), 1.5)


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_kruskal_matches_enumeration(n):
    rng = np.random.default_rng(n)
    for _ in range(50 if n < 7 else 8):
        g = random_complete(n, rng, integer=bool(rng.integers(2)))
        lam = float(rng.choice([0.0, 1.0, rng.random()]))
        view = ScalarizedView(g, lam)
        t = kruskal(view)
        assert t.is_valid()
        assert view.weight(t) == brute_min(g, lam)


def test_prim_agrees_with_kruskal_on_subsets():
    rng = np.random.default_rng(3)
    for _ in range(50):
        g = random_complete(9, rng, integer=False)
        nodes = set(rng.choice(np.arange(1, 10), size=int(rng.integers(2, 10)), replace=False).tolist())
        view = ScalarizedView(g, float(rng.random()))
        a = kruskal(view, nodes)
        b = kruskal(view, nodes, use_prim=True)
        assert math.isclose(view.weight(a), view.weight(b), rel_tol=1e-12)


def test_extreme_weights_are_lexicographic():
    rng = np.random.default_rng(8)
    for _ in range(10):
        g = random_complete(6, rng, high=4)
        front, _ = enumerate_pareto_set(g)
        t1 = kruskal(ScalarizedView(g, 1.0))
        t0 = kruskal(ScalarizedView(g, 0.0))
        assert t1.cost.as_tuple() == tuple(front[0])
        assert t0.cost.as_tuple() == tuple(front[-1])


def _forest_uf(graph, edges):
    uf = UnionFind(graph.n)
    for e in edges:
        uf.union(*graph.endpoints(int(e)))
    return uf


def test_fig_seeded_reconnection(fig_graph, fig_parent):
    drop = {fig_graph.edge_index(1, 2), fig_graph.edge_index(7, 8)}
    forest = [e for e in fig_parent.edges if e not in drop]
    t = kruskal_seeded(ScalarizedView(fig_graph, 1.0), forest, _forest_uf(fig_graph, forest))
    assert t.pairs() == [(1, 2), (2, 3), (3, 5), (4, 5), (4, 7), (5, 8), (6, 9), (8, 9)]


def test_seeded_identity_and_reduction(fig_graph, fig_parent):
    view = ScalarizedView(fig_graph, 0.7)
    same = kruskal_seeded(view, fig_parent.edges, _forest_uf(fig_graph, fig_parent.edges))
    assert same == fig_parent
    empty = kruskal_seeded(view, [], UnionFind(fig_graph.n))
    assert empty == kruskal(view)


def test_seeded_contract_violations(fig_graph, fig_parent):
    view = ScalarizedView(fig_graph, 0.5)
    forest = list(fig_parent.edges[:4])
    with pytest.raises(ContractError):
        kruskal_seeded(view, forest, UnionFind(fig_graph.n))
    uf = _forest_uf(fig_graph, forest)
    uf.union(1, 9)
    with pytest.raises(ContractError):
        kruskal_seeded(view, forest, uf)
    cyc = [fig_graph.edge_index(*p) for p in [(2, 5), (3, 5), (2, 3)]]
    with pytest.raises(ContractError):
        kruskal_seeded(view, cyc, _forest_uf(fig_graph, cyc))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.floats(0, 1))
def test_seeded_output_contains_forest(seed, lam):
    rng = np.random.default_rng(seed)
    g = random_complete(8, rng)
    base = kruskal(ScalarizedView(g, float(rng.random())))
    keep = [e for e in base.edges if rng.random() < 0.5]
    t = kruskal_seeded(ScalarizedView(g, lam), keep, _forest_uf(g, keep))
    assert t.is_valid() and set(keep) <= t.edge_indices


def test_lambda_grid_endpoints():
    grid = lambda_grid(5)
    assert grid[0] == 1.0 and grid[-1] == 0.0 and len(grid) == 5
    with pytest.raises(ValueError):
        lambda_grid(1)


def test_sweep_with_two_weights_has_extremes():
    g = generate(InstanceSpec("C1", 10, 2))
    arch = weighted_sum_sweep(g, 2)
    costs = arch.costs()
    assert costs[0] == kruskal(ScalarizedView(g, 1.0)).cost.as_tuple()
    assert costs[-1] == kruskal(ScalarizedView(g, 0.0)).cost.as_tuple()


@pytest.mark.parametrize("cls", ["C1", "C3", "C4"])
def test_sweep_points_are_pareto_optimal(cls):
    for seed in range(3):
        g = generate(InstanceSpec(cls, 6, seed))
        front, _ = enumerate_pareto_set(g)
        on_front = set(map(tuple, front.tolist()))
        costs = weighted_sum_sweep(g, 5000).costs()
        assert set(costs) <= on_front
        assert not any(dominates(a, b) for a in costs for b in costs)


def test_sweep_misses_unsupported_points_on_c2():
    missed = 0
    for seed in range(10):
        g = generate(InstanceSpec("C2", 7, seed))
        front, _ = enumerate_pareto_set(g)
        missed += len(front) - len(weighted_sum_sweep(g, 5000).costs())
    assert missed > 0


def test_prim_on_sparse_graph(fig_graph):
    view = ScalarizedView(fig_graph, 0.5)
    assert kruskal(view, use_prim=True) == kruskal(view)
    assert kruskal(view, {4, 5, 7, 8}, use_prim=True).pairs() == [(4, 5), (4, 8), (7, 8)]
    with pytest.raises(NoSpanningTreeError):
        kruskal(view, {1, 9}, use_prim=True)
