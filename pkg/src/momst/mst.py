"""Single-objective MST machinery on weighted-sum scalarisations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from . import _kernels as K
from .graph import Graph, GraphError, NoSpanningTreeError, SpanningTree, UnionFind
from .pareto import ParetoArchive

SWEEP_WEIGHTS_ANALYSIS = 5_000
SWEEP_WEIGHTS_BASELINE = 50_000


class ContractError(GraphError):
    """Inputs are individually valid but inconsistent with each other."""


@dataclass(frozen=True)
class ScalarizedView:
    """``host`` with edge weights ``lam*c1 + (1-lam)*c2``.

    Ties in that weight are broken by the mirrored weight
    ``(1-lam)*c1 + lam*c2`` and then by edge index, so the extreme weights
    0 and 1 yield lexicographic optima.
    """

    host: Graph
    lam: float

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")

    @cached_property
    def weights(self) -> np.ndarray:
        return self.lam * self.host.c1 + (1.0 - self.lam) * self.host.c2

    def weight(self, tree: SpanningTree) -> float:
        """Correctly rounded total weight (``math.fsum``)."""
        return math.fsum(self.weights[tree.edges])


def kruskal(view: ScalarizedView, restrict_to_nodes: Iterable[int] | None = None,
            use_prim: bool = False) -> SpanningTree:
    """Minimum spanning tree of the host, or of the sub-graph induced by a node set.

    ``use_prim`` switches to dense Prim (O(s^2) on s nodes); both reach the
    same optimum weight.
    """
    g = view.host
    if restrict_to_nodes is None:
        nodes = np.arange(g.n, dtype=np.int64)
    else:
        nodes = np.asarray(sorted({int(v) for v in restrict_to_nodes}), np.int64) - 1
        if len(nodes) and (nodes[0] < 0 or nodes[-1] >= g.n):
            raise GraphError("node label out of range")
    if use_prim:
        edges = K.prim_nodes(nodes, g.eid, g.c1, g.c2, view.lam)
        added = len(edges)
    elif restrict_to_nodes is None:
        parent = np.arange(g.n)
        rank = np.zeros(g.n, np.int64)
        edges, added = K.kruskal_seeded(np.empty(0, np.int64), g.n, g.eu, g.ev, g.c1, g.c2,
                                        view.lam, parent, rank)
    else:
        edges, added = K.kruskal_nodes(nodes, g.eid, g.eu, g.ev, g.c1, g.c2, view.lam)
    if added != len(nodes) - 1:
        raise NoSpanningTreeError(f"induced sub-graph on {len(nodes)} nodes is disconnected")
    labels = None if restrict_to_nodes is None else (nodes + 1).tolist()
    return SpanningTree(g, edges, nodes=labels, validate=False)


def kruskal_seeded(view: ScalarizedView, forest: Iterable[int], components: UnionFind) -> SpanningTree:
    """Complete an acyclic ``forest`` (edge indices) to a minimum spanning tree.

    ``components`` must describe exactly the forest's connected components;
    it is consumed (further unions are applied to it).
    """
    g = view.host
    forest = np.asarray(sorted(int(e) for e in forest), np.int64)
    check = UnionFind(g.n)
    for e in forest:
        u, v = g.endpoints(int(e))
        if not check.union(u, v):
            raise ContractError("forest contains a cycle")
        if not components.connected(u, v):
            raise ContractError(f"forest edge {{{u}, {v}}} joins two union-find components")
    if components.components != check.components:
        raise ContractError(f"union-find has {components.components} components, "
                            f"forest has {check.components}")
    before = components.components
    edges, added = K.kruskal_seeded(forest, g.n, g.eu, g.ev, g.c1, g.c2, view.lam,
                                    components.parent, components.rank)
    components.components = before - (added - len(forest))
    if added != g.n - 1:
        raise NoSpanningTreeError("graph is disconnected")
    return SpanningTree(g, edges, validate=False)


def lambda_grid(k: int) -> np.ndarray:
    """``(k - idx) / (k - 1)`` for idx = 1..k: from 1 down to 0, endpoints exact."""
    if k < 2:
        raise ValueError("need at least two weights")
    return (k - np.arange(1, k + 1)) / (k - 1)


def weighted_sum_sweep(graph: Graph, k: int = SWEEP_WEIGHTS_ANALYSIS) -> ParetoArchive:
    """Supported efficient trees from ``k`` equidistant weights, one tree per distinct cost."""
    if not graph.is_connected():
        raise NoSpanningTreeError("graph is disconnected")
    trees, _ = K.sweep(graph.n, graph.eu, graph.ev, graph.c1, graph.c2, lambda_grid(k))
    archive = ParetoArchive(unique_costs=True)
    for row in trees:
        archive.add(SpanningTree(graph, row, validate=False))
    return archive
