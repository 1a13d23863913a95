import itertools

import numpy as np
import pytest

from momst.graph import Graph, SpanningTree

# Example graph of the worked SG/USG examples: (u, v, c1, c2), 1-based.
FIG_EDGES = [
    (1, 2, 2, 2), (1, 4, 4, 1), (2, 3, 5, 3), (2, 5, 1, 1), (3, 5, 1, 1), (4, 5, 3, 1),
    (4, 7, 6, 8), (4, 8, 3, 1), (5, 6, 6, 8), (5, 8, 1, 9), (6, 8, 6, 6), (6, 9, 3, 1),
    (7, 8, 10, 2), (8, 9, 1, 5),
]
FIG_PARENT = [(1, 2), (2, 3), (3, 5), (4, 7), (5, 8), (6, 9), (7, 8), (8, 9)]


@pytest.fixture
def fig_graph():
    return Graph(9, FIG_EDGES)


@pytest.fixture
def fig_parent(fig_graph):
    return SpanningTree.from_pairs(fig_graph, FIG_PARENT)


def random_complete(n, rng, low=1, high=20, integer=True):
    u, v = np.triu_indices(n, 1)
    if integer:
        c1 = rng.integers(low, high + 1, len(u)).astype(float)
        c2 = rng.integers(low, high + 1, len(u)).astype(float)
    else:
        c1 = rng.uniform(low, high, len(u))
        c2 = rng.uniform(low, high, len(u))
    return Graph.from_arrays(n, u, v, c1, c2, complete=True)


def brute_pareto(points):
    """Quadratic non-dominated filter, distinct vectors, sorted."""
    pts = sorted(set(map(tuple, points)))
    out = []
    for p in pts:
        if not any(q[0] <= p[0] and q[1] <= p[1] and q != p for q in pts):
            out.append(p)
    return out


def all_subsets_trees(graph):
    """Spanning trees by brute force over (n-1)-edge subsets."""
    out = []
    for combo in itertools.combinations(range(graph.m), graph.n - 1):
        parent = list(range(graph.n))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        ok = True
        for e in combo:
            a, b = find(int(graph.eu[e])), find(int(graph.ev[e]))
            if a == b:
                ok = False
                break
            parent[a] = b
        if ok:
            out.append(frozenset(combo))
    return out


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
