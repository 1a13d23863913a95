"""Graph and spanning-tree data model.

Node labels are 1-based in every public method (matching the usual figure
numbering); the numpy arrays on :class:`Graph` (``eu``, ``ev``, ``eid`` and the
adjacency arrays) are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K


class GraphError(ValueError):
    """Raised when a graph or tree violates its structural invariants."""


class NoSpanningTreeError(GraphError):
    """Raised when the (sub)graph to be spanned is disconnected."""


@dataclass(frozen=True, slots=True)
class CostVector:
    c1: float
    c2: float

    def __post_init__(self):
        if not (self.c1 > 0 and self.c2 > 0):
            raise ValueError(f"costs must be strictly positive, got ({self.c1}, {self.c2})")

    def __add__(self, other: "CostVector") -> "CostVector":
        return CostVector(self.c1 + other.c1, self.c2 + other.c2)

    def __iter__(self):
        yield self.c1
        yield self.c2

    def as_tuple(self) -> tuple[float, float]:
        return (self.c1, self.c2)


def dominates(a, b) -> bool:
    """Pareto dominance for minimisation: ``a`` no worse everywhere, better somewhere."""
    a1, a2 = a
    b1, b2 = b
    return a1 <= b1 and a2 <= b2 and (a1 < b1 or a2 < b2)


class Graph:
    """Undirected graph with a bi-objective cost on each edge.

    Immutable after construction. Edges keep the order they were given in;
    that order is the tie-break everywhere an algorithm has to pick between
    equally good edges.

    Args:
        n: number of nodes, labelled ``1..n``.
        edges: ``(u, v, c1, c2)`` tuples with 1-based endpoints.
        complete: if given, assert (``True``) or deny (``False``) completeness.
    """

    def __init__(self, n: int, edges: Iterable[Sequence[float]], complete: bool | None = None):
        rows = np.asarray([tuple(e) for e in edges], dtype=float).reshape(-1, 4)
        if np.any(rows[:, :2] != np.round(rows[:, :2])):
            raise GraphError("endpoints must be integers")
        self._setup(n, rows[:, 0].astype(np.int64) - 1, rows[:, 1].astype(np.int64) - 1,
                    rows[:, 2].copy(), rows[:, 3].copy(), complete)

    @classmethod
    def from_arrays(cls, n: int, u, v, c1, c2, complete: bool | None = None) -> "Graph":
        """Build from 0-based endpoint arrays without going through tuples."""
        g = cls.__new__(cls)
        g._setup(n, np.asarray(u, np.int64).copy(), np.asarray(v, np.int64).copy(),
                 np.asarray(c1, float).copy(), np.asarray(c2, float).copy(), complete)
        return g

    def _setup(self, n, u, v, c1, c2, complete):
        if n < 1:
            raise GraphError("a graph needs at least one node")
        m = len(u)
        bad = np.flatnonzero((u < 0) | (u >= n) | (v < 0) | (v >= n))
        if len(bad):
            i = bad[0]
            raise GraphError(f"edge {i}: endpoint out of range 1..{n}: ({u[i] + 1}, {v[i] + 1})")
        bad = np.flatnonzero(u == v)
        if len(bad):
            raise GraphError(f"edge {bad[0]}: self-loop at node {u[bad[0]] + 1}")
        bad = np.flatnonzero(~(np.isfinite(c1) & np.isfinite(c2) & (c1 > 0) & (c2 > 0)))
        if len(bad):
            i = bad[0]
            raise GraphError(f"edge {i}: costs must be finite and > 0, got ({c1[i]}, {c2[i]})")
        eu, ev = np.minimum(u, v), np.maximum(u, v)
        key = eu * n + ev
        _, first = np.unique(key, return_index=True)
        if len(first) != m:
            dup = np.setdiff1d(np.arange(m), first)[0]
            raise GraphError(f"edge {dup}: parallel edge {{{eu[dup] + 1}, {ev[dup] + 1}}}")
        eid = np.full((n, n), -1, np.int64)
        eid[eu, ev] = np.arange(m)
        eid[ev, eu] = np.arange(m)
        is_complete = m == n * (n - 1) // 2
        if complete is True and not is_complete:
            raise GraphError(f"flagged complete but m={m} != n(n-1)/2={n * (n - 1) // 2}")
        self.n = n
        self.m = m
        self.complete = is_complete
        self.eu, self.ev, self.c1, self.c2, self.eid = eu, ev, c1, c2, eid

        src = np.concatenate([eu, ev])
        dst = np.concatenate([ev, eu])
        ids = np.concatenate([np.arange(m), np.arange(m)])
        order = np.lexsort((ids, src))
        ptr = np.zeros(n + 1, np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=ptr[1:])
        self.adj_ptr, self.adj_nbr, self.adj_eid = ptr, dst[order].copy(), ids[order].copy()
        for arr in (eu, ev, c1, c2, eid, ptr, self.adj_nbr, self.adj_eid):
            arr.flags.writeable = False

    @classmethod
    def complete_graph(cls, n: int, costs=None) -> "Graph":
        """Complete graph with edges in lexicographic ``(u, v)`` order.

        ``costs`` is an ``(m, 2)`` array-like; unit costs when omitted.
        """
        u, v = np.triu_indices(n, 1)
        if costs is None:
            costs = np.ones((len(u), 2))
        costs = np.asarray(costs, dtype=float)
        return cls.from_arrays(n, u, v, costs[:, 0], costs[:, 1], complete=True)

    @property
    def edges(self) -> list[tuple[int, int, CostVector]]:
        return [(int(a) + 1, int(b) + 1, CostVector(float(x), float(y)))
                for a, b, x, y in zip(self.eu, self.ev, self.c1, self.c2)]

    @property
    def costs(self) -> np.ndarray:
        return np.column_stack([self.c1, self.c2])

    @cached_property
    def max_degree(self) -> int:
        return int(np.diff(self.adj_ptr).max()) if self.n else 0

    def degree(self, v: int) -> int:
        return int(self.adj_ptr[v] - self.adj_ptr[v - 1])

    def neighbors(self, v: int) -> list[tuple[int, int]]:
        """``(neighbour, edge index)`` pairs of node ``v`` in stored order."""
        lo, hi = self.adj_ptr[v - 1], self.adj_ptr[v]
        return [(int(w) + 1, int(e)) for w, e in zip(self.adj_nbr[lo:hi], self.adj_eid[lo:hi])]

    def edge_index(self, u: int, v: int) -> int:
        e = int(self.eid[u - 1, v - 1])
        if e < 0:
            raise KeyError(f"no edge {{{u}, {v}}}")
        return e

    def endpoints(self, e: int) -> tuple[int, int]:
        return int(self.eu[e]) + 1, int(self.ev[e]) + 1

    def cost(self, e: int) -> CostVector:
        return CostVector(float(self.c1[e]), float(self.c2[e]))

    def is_connected(self) -> bool:
        return K.count_components(self.n, self.eu, self.ev) == 1

    def _edge_table(self) -> np.ndarray:
        lo, hi = np.minimum(self.eu, self.ev), np.maximum(self.eu, self.ev)
        table = np.column_stack([lo, hi, self.c1, self.c2])
        return table[np.lexsort((hi, lo))]

    def structurally_equal(self, other: "Graph") -> bool:
        """Same node count and the same set of (edge, cost) entries, in any order."""
        return (self.n == other.n and self.m == other.m
                and np.array_equal(self._edge_table(), other._edge_table()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m}, complete={self.complete})"


class SpanningTree:
    """A tree in ``host`` given by its edge indices.

    By default the tree spans every node of the host; pass ``nodes`` (1-based)
    for a tree spanning only an induced sub-graph.
    """

    __slots__ = ("host", "edges", "nodes", "_cost")

    def __init__(self, host: Graph, edges, nodes: Iterable[int] | None = None, validate: bool = True):
        arr = np.sort(np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                                 dtype=np.int64))
        arr.flags.writeable = False
        self.host = host
        self.edges = arr
        self.nodes = None if nodes is None else frozenset(int(v) for v in nodes)
        self._cost = None
        if validate:
            self.validate()

    @classmethod
    def from_pairs(cls, host: Graph, pairs: Iterable[tuple[int, int]], **kw) -> "SpanningTree":
        return cls(host, [host.edge_index(u, v) for u, v in pairs], **kw)

    @property
    def n_nodes(self) -> int:
        return self.host.n if self.nodes is None else len(self.nodes)

    @property
    def edge_indices(self) -> frozenset[int]:
        return frozenset(int(e) for e in self.edges)

    def pairs(self) -> list[tuple[int, int]]:
        """Edges as sorted 1-based ``(u, v)`` tuples with ``u < v``."""
        return sorted(self.host.endpoints(int(e)) for e in self.edges)

    @property
    def cost(self) -> CostVector:
        if self._cost is None:
            self._cost = CostVector(*K.tree_cost(self.edges, self.host.c1, self.host.c2))
        return self._cost

    def fresh_cost(self) -> CostVector:
        """Cost summed from scratch, bypassing the memo."""
        return CostVector(float(sum(self.host.c1[e] for e in self.edges)),
                          float(sum(self.host.c2[e] for e in self.edges)))

    def is_valid(self) -> bool:
        try:
            self.validate()
        except GraphError:
            return False
        return True

    def validate(self) -> None:
        h = self.host
        if len(self.edges) and (self.edges[0] < 0 or self.edges[-1] >= h.m):
            raise GraphError("edge index out of range")
        if len(set(self.edges.tolist())) != len(self.edges):
            raise GraphError("repeated edge")
        if self.nodes is None:
            if not K.is_spanning_tree(self.edges, h.eu, h.ev, h.n):
                raise GraphError(f"not a spanning tree of the {h.n}-node host "
                                 f"({len(self.edges)} edges)")
            return
        if len(self.edges) != len(self.nodes) - 1:
            raise GraphError(f"{len(self.edges)} edges cannot span {len(self.nodes)} nodes")
        uf = UnionFind(h.n)
        for e in self.edges:
            u, v = h.endpoints(int(e))
            if u not in self.nodes or v not in self.nodes:
                raise GraphError(f"edge {{{u}, {v}}} leaves the node set")
            if not uf.union(u, v):
                raise GraphError("cycle")

    def __eq__(self, other):
        if not isinstance(other, SpanningTree):
            return NotImplemented
        return self.host is other.host and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        return hash((id(self.host), self.edges.tobytes()))

    def __len__(self):
        return len(self.edges)

    def __repr__(self):
        return f"SpanningTree({self.pairs()})"


class UnionFind:
    """Disjoint sets over nodes ``1..n`` (union by rank, path halving)."""

    def __init__(self, n: int):
        self.parent = np.arange(n, dtype=np.int64)
        self.rank = np.zeros(n, dtype=np.int64)
        self.components = n

    def find(self, x: int) -> int:
        return int(K.uf_find(self.parent, x - 1)) + 1

    def union(self, a: int, b: int) -> bool:
        merged = bool(K.uf_union(self.parent, self.rank, a - 1, b - 1))
        if merged:
            self.components -= 1
        return merged

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)

    def partition(self) -> list[frozenset[int]]:
        groups: dict[int, set[int]] = {}
        for v in range(1, len(self.parent) + 1):
            groups.setdefault(self.find(v), set()).add(v)
        return sorted((frozenset(g) for g in groups.values()), key=min)

    def copy(self) -> "UnionFind":
        uf = UnionFind.__new__(UnionFind)
        uf.parent = self.parent.copy()
        uf.rank = self.rank.copy()
        uf.components = self.components
        return uf
