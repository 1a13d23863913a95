"""Spanning-tree construction: Prüfer codec, random trees, exhaustive enumeration."""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from . import _kernels as K
from .graph import Graph, GraphError, NoSpanningTreeError, SpanningTree, UnionFind

MAX_ENUMERATION_NODES = 9


class InvalidCodeError(ValueError):
    pass


class EnumerationTooLarge(ValueError):
    pass


@lru_cache(maxsize=32)
def _unit_complete(n: int) -> Graph:
    return Graph.complete_graph(n)


def as_rng(rng) -> np.random.Generator:
    """Accept a Generator, an integer seed or None."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def prufer_decode(code, n: int, graph: Graph | None = None) -> SpanningTree:
    """Decode a 1-based Prüfer code into a spanning tree of the complete graph on ``n`` nodes.

    The tree is attached to ``graph`` when given (it must be complete on ``n``
    nodes), otherwise to a unit-cost complete graph.
    """
    code = [int(x) for x in code]
    if n < 2:
        raise InvalidCodeError("n must be at least 2")
    if len(code) != n - 2:
        raise InvalidCodeError(f"code length {len(code)} != n - 2 = {n - 2}")
    for i, x in enumerate(code):
        if not 1 <= x <= n:
            raise InvalidCodeError(f"entry {i} = {x} outside 1..{n}")
    host = graph if graph is not None else _unit_complete(n)
    if host.n != n or not host.complete:
        raise GraphError("Prüfer decoding needs a complete host graph on n nodes")
    pairs = K.prufer_decode_pairs(np.asarray(code, np.int64) - 1, n)
    return SpanningTree(host, K.pairs_to_edges(pairs, host.eid), validate=False)


def prufer_encode(tree: SpanningTree) -> list[int]:
    n = tree.host.n
    if n < 3:
        return []
    code = K.prufer_encode(tree.edges, tree.host.eu, tree.host.ev, n)
    return [int(x) + 1 for x in code]


def random_spanning_tree(graph: Graph, rng=None) -> SpanningTree:
    """Uniform random spanning tree by Broder's random walk.

    The walk starts at a uniformly drawn node; the edges through which nodes
    are first entered form the tree.
    """
    if not graph.is_connected():
        raise NoSpanningTreeError("graph is disconnected")
    if graph.n == 1:
        return SpanningTree(graph, [])
    edges = K.broder(graph.n, graph.adj_ptr, graph.adj_nbr, graph.adj_eid, as_rng(rng))
    return SpanningTree(graph, edges, validate=False)


def enumerate_tree_edges(graph: Graph) -> np.ndarray:
    """All spanning trees as rows of sorted edge indices."""
    n = graph.n
    if n > MAX_ENUMERATION_NODES:
        raise EnumerationTooLarge(f"refusing to enumerate spanning trees for n={n} > "
                                  f"{MAX_ENUMERATION_NODES}")
    if n == 1:
        return np.empty((1, 0), np.int64)
    if graph.complete:
        return K.all_prufer_trees(n, graph.eid)
    rows = []
    for subset in itertools.combinations(range(graph.m), n - 1):
        uf = UnionFind(n)
        if all(uf.union(int(graph.eu[e]) + 1, int(graph.ev[e]) + 1) for e in subset):
            rows.append(subset)
    return np.asarray(rows, np.int64).reshape(-1, n - 1)


def enumerate_spanning_trees(graph: Graph) -> list[SpanningTree]:
    """Every spanning tree exactly once (Prüfer codes for complete graphs, edge subsets otherwise)."""
    return [SpanningTree(graph, row, validate=False) for row in enumerate_tree_edges(graph)]


def enumerate_pareto_set(graph: Graph) -> tuple[np.ndarray, list[SpanningTree]]:
    """Exact Pareto front by brute force.

    Returns the distinct non-dominated cost vectors (ascending ``c1``) and all
    trees attaining one of them.
    """
    rows = enumerate_tree_edges(graph)
    costs = np.column_stack([graph.c1[rows].sum(axis=1), graph.c2[rows].sum(axis=1)])
    order = np.lexsort((costs[:, 1], costs[:, 0]))
    front = []
    best2 = np.inf
    for i in order:
        a, b = costs[i]
        if b < best2:
            front.append((a, b))
            best2 = b
    front = np.asarray(front)
    keys = {tuple(p) for p in front.tolist()}
    trees = [SpanningTree(graph, rows[i], validate=False)
             for i in range(len(rows)) if tuple(costs[i].tolist()) in keys]
    return front, trees
