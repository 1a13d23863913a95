"""Mutation operators for spanning trees.

Baselines work on the Prüfer code (UNIFORM) or exchange a single edge
(1EX, and 1BEX with a dominance-biased edge choice). The sub-graph operators
re-optimise part of the tree under a random weighted-sum scalarisation:
SG/SGS replace a BFS-connected sub-tree, USG/USGS drop arbitrary tree edges
and reconnect the forest with a seeded Kruskal. SG and USG round the weight
to 0 or 1; the scalarised variants keep it in [0, 1].
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels as K
from .graph import Graph, GraphError, SpanningTree
from .trees import as_rng


class Operator(enum.Enum):
    UNIFORM = "UNIFORM"
    EX1 = "1EX"
    BEX1 = "1BEX"
    SG = "SG"
    SGS = "SGS"
    USG = "USG"
    USGS = "USGS"

    @classmethod
    def parse(cls, name) -> "Operator":
        if isinstance(name, cls):
            return name
        key = str(name).upper()
        for op in cls:
            if key in (op.value, op.name):
                return op
        raise ValueError(f"unknown operator {name!r}; expected one of "
                         f"{', '.join(op.value for op in cls)}")

    @property
    def code(self) -> int:
        return _CODES[self]

    @property
    def is_subgraph(self) -> bool:
        return self in (Operator.SG, Operator.SGS, Operator.USG, Operator.USGS)

    @property
    def rounds_lambda(self) -> bool:
        return self in (Operator.SG, Operator.USG)


_CODES = {
    Operator.UNIFORM: K.OP_UNIFORM, Operator.EX1: K.OP_EX1, Operator.BEX1: K.OP_BEX1,
    Operator.SG: K.OP_SG, Operator.SGS: K.OP_SGS, Operator.USG: K.OP_USG, Operator.USGS: K.OP_USGS,
}


def sigma_for(rule, n: int) -> int:
    """Resolve a sigma rule: an int, ``"half"`` (n/2), ``"logsq"`` ((ln n)^2),
    ``"log"`` (ln n) or ``"sqrt"``; fractional results round to nearest."""
    if isinstance(rule, (int, np.integer)):
        return int(rule)
    text = str(rule).strip().lower()
    if text.lstrip("-").isdigit():
        return int(text)
    values = {
        "half": n / 2,
        "logsq": math.log(n) ** 2,
        "log": math.log(n),
        "sqrt": math.sqrt(n),
    }
    if text not in values:
        raise ValueError(f"unknown sigma rule {rule!r}")
    return int(math.floor(values[text] + 0.5))


@dataclass
class MutationConfig:
    """Operator choice and parameters.

    ``usg_min_s`` is the smallest number of edges USG/USGS may drop (1 by
    default; 3 reproduces the stricter range). ``force_s`` pins s to sigma,
    which is what the runtime measurements use.
    """

    operator: Operator
    sigma: int | None = None
    round_lambda: bool | None = None
    rng: np.random.Generator | None = None
    usg_min_s: int = 1
    force_s: bool = False
    use_prim: bool = False
    _scratch: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.operator = Operator.parse(self.operator)
        if self.round_lambda is None:
            self.round_lambda = self.operator.rounds_lambda
        elif self.operator.is_subgraph and self.round_lambda != self.operator.rounds_lambda:
            raise ValueError(f"{self.operator.value} implies round_lambda={self.operator.rounds_lambda}")
        if self.use_prim and self.operator not in (Operator.SG, Operator.SGS):
            raise ValueError("the Prim variant is only available for SG/SGS")
        self.rng = as_rng(self.rng)

    def check_sigma(self, n: int) -> int:
        op = self.operator
        if not op.is_subgraph:
            return 0
        if self.sigma is None:
            raise ValueError(f"{op.value} needs sigma")
        s = int(self.sigma)
        if op in (Operator.SG, Operator.SGS):
            if not 3 <= s <= n:
                raise ValueError(f"{op.value}: sigma must lie in 3..{n}, got {s}")
        else:
            lo = self.usg_min_s
            if lo not in (1, 3):
                raise ValueError("usg_min_s must be 1 or 3")
            if not lo <= s <= n - 1:
                raise ValueError(f"{op.value}: sigma must lie in {lo}..{n - 1}, got {s}")
        return s

    def visited(self, n: int) -> np.ndarray:
        # per-worker BFS marks; kernels reset exactly the entries they set
        if self._scratch is None or len(self._scratch) != n:
            self._scratch = np.zeros(n, np.int64)
        return self._scratch

    def with_rng(self, rng) -> "MutationConfig":
        return replace(self, rng=as_rng(rng), _scratch=None)


@dataclass(frozen=True)
class EdgeBias:
    """Edge sampling distribution favouring rarely dominated edges."""

    domination_counts: np.ndarray
    probabilities: np.ndarray
    cumulative: np.ndarray

    def sample(self, rng) -> int:
        u = as_rng(rng).random()
        return int(min(np.searchsorted(self.cumulative, u, side="right"), len(self.cumulative) - 1))


def precompute_bias(graph: Graph) -> EdgeBias:
    """Weight ``1 + max_count - count(e)`` per edge, normalised.

    ``count(e)`` is the number of edges whose cost vector dominates that of e.
    """
    counts = K.domination_counts(graph.c1, graph.c2)
    w = (1 + counts.max() - counts).astype(float)
    p = w / w.sum()
    cum = np.cumsum(p)
    cum[-1] = 1.0
    for arr in (counts, p, cum):
        arr.flags.writeable = False
    return EdgeBias(counts, p, cum)


_NO_BIAS = np.ones(1)


def _kernel_args(graph: Graph):
    return (graph.n, graph.eu, graph.ev, graph.c1, graph.c2,
            graph.adj_ptr, graph.adj_nbr, graph.adj_eid, graph.eid)


def _require_complete(graph: Graph):
    if not graph.complete:
        raise GraphError("UNIFORM mutation works on Prüfer codes and needs a complete graph")


def apply(tree: SpanningTree, cfg: MutationConfig, bias: EdgeBias | None = None) -> SpanningTree:
    """Apply the configured operator once."""
    g = tree.host
    op = cfg.operator
    sigma = cfg.check_sigma(g.n)
    if op is Operator.UNIFORM:
        _require_complete(g)
        if g.n < 3:
            raise GraphError("UNIFORM mutation needs n >= 3")
    if op is Operator.BEX1 and bias is None:
        raise ValueError("1BEX needs an EdgeBias (see precompute_bias)")
    cum = bias.cumulative if bias is not None else _NO_BIAS
    child = K.mutate_one(op.code, *_kernel_args(g), cum, tree.edges, sigma, cfg.usg_min_s,
                         cfg.force_s, cfg.use_prim, cfg.rng, cfg.visited(g.n))
    return SpanningTree(g, child, validate=False)


def mutate_uniform(tree: SpanningTree, rng=None) -> SpanningTree:
    """Replace one random position of the Prüfer code by a random label."""
    return apply(tree, MutationConfig(Operator.UNIFORM, rng=as_rng(rng)))


def mutate_1ex(tree: SpanningTree, rng=None, bias: EdgeBias | None = None) -> SpanningTree:
    """One-edge exchange; biased (1BEX) when ``bias`` is given.

    A sampled edge that is already in the tree leaves the tree unchanged.
    """
    op = Operator.EX1 if bias is None else Operator.BEX1
    return apply(tree, MutationConfig(op, rng=as_rng(rng)), bias)


def mutate_sg(tree: SpanningTree, cfg: MutationConfig) -> SpanningTree:
    if cfg.operator not in (Operator.SG, Operator.SGS):
        raise ValueError(f"mutate_sg called with {cfg.operator.value}")
    return apply(tree, cfg)


def mutate_usg(tree: SpanningTree, cfg: MutationConfig) -> SpanningTree:
    if cfg.operator not in (Operator.USG, Operator.USGS):
        raise ValueError(f"mutate_usg called with {cfg.operator.value}")
    return apply(tree, cfg)


# deterministic single steps (all random choices supplied by the caller)

def bfs_nodes(tree: SpanningTree, start: int, s: int) -> list[int]:
    """Nodes reached by the size-limited BFS on ``tree``, in visiting order (1-based)."""
    g = tree.host
    ptr, nbr, _ = K.tree_adjacency(tree.edges, g.eu, g.ev, g.n)
    visited = np.zeros(g.n, np.int64)
    nodes = np.empty(s, np.int64)
    cnt = K.bfs_limited(ptr, nbr, start - 1, s, visited, nodes)
    return (nodes[:cnt] + 1).tolist()


def subgraph_step(tree: SpanningTree, start: int, s: int, lam: float,
                  use_prim: bool = False) -> tuple[SpanningTree, list[int]]:
    """SG core: BFS from ``start`` for ``s`` nodes, re-optimise that sub-tree at ``lam``.

    Returns the mutant and the selected node set in visiting order.
    """
    g = tree.host
    if not 1 <= s <= g.n:
        raise ValueError(f"s must lie in 1..{g.n}")
    visited = np.zeros(g.n, np.int64)
    child, nodes = K.sg_step(*_kernel_args(g), tree.edges, start - 1, s, float(lam),
                             visited, use_prim)
    return SpanningTree(g, child, validate=False), (nodes + 1).tolist()


def unconnected_step(tree: SpanningTree, dropped, lam: float) -> SpanningTree:
    """USG core: remove the given tree edges (1-based pairs or edge indices), reconnect at ``lam``."""
    g = tree.host
    ids = set()
    for d in dropped:
        ids.add(g.edge_index(*d) if isinstance(d, tuple) else int(d))
    pos = {int(e): i for i, e in enumerate(tree.edges)}
    missing = ids - pos.keys()
    if missing:
        raise ValueError(f"edges {sorted(missing)} are not in the tree")
    drop = np.zeros(len(tree.edges), np.bool_)
    for e in ids:
        drop[pos[e]] = True
    child = K.usg_step(g.n, g.eu, g.ev, g.c1, g.c2, tree.edges, drop, float(lam))
    return SpanningTree(g, child, validate=False)


def uniform_step(tree: SpanningTree, position: int, value: int) -> SpanningTree:
    """UNIFORM core: set Prüfer position ``position`` (0-based) to label ``value`` (1-based)."""
    g = tree.host
    _require_complete(g)
    code = K.prufer_encode(tree.edges, g.eu, g.ev, g.n)
    if not 0 <= position < len(code):
        raise ValueError(f"position must lie in 0..{len(code) - 1}")
    if not 1 <= value <= g.n:
        raise ValueError(f"value must lie in 1..{g.n}")
    code[position] = value - 1
    return SpanningTree(g, K.pairs_to_edges(K.prufer_decode_pairs(code, g.n), g.eid), validate=False)


def exchange_step(tree: SpanningTree, add: tuple[int, int], drop: tuple[int, int]) -> SpanningTree:
    """Insert edge ``add`` and remove ``drop``, which must lie on the closed cycle."""
    g = tree.host
    e_add = g.edge_index(*add)
    e_drop = g.edge_index(*drop)
    if e_add in tree.edge_indices:
        return tree
    u, v = int(g.eu[e_add]), int(g.ev[e_add])
    path = K.tree_path(g.n, g.eu, g.ev, tree.edges, u, v)
    if e_drop not in set(path.tolist()):
        raise ValueError(f"{drop} is not on the cycle closed by {add}")
    return SpanningTree(g, K.exchange(tree.edges, e_add, e_drop), validate=False)


def cycle_edges(tree: SpanningTree, add: tuple[int, int]) -> list[tuple[int, int]]:
    """Tree edges on the cycle closed by ``add`` (empty if ``add`` is a tree edge)."""
    g = tree.host
    e_add = g.edge_index(*add)
    if e_add in tree.edge_indices:
        return []
    path = K.tree_path(g.n, g.eu, g.ev, tree.edges, int(g.eu[e_add]), int(g.ev[e_add]))
    return [g.endpoints(int(e)) for e in path]
