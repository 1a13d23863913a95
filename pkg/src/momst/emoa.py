"""Mutation-only NSGA-II and random walks."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from . import _kernels as K
from .graph import CostVector, Graph, SpanningTree
from .mutation import EdgeBias, MutationConfig, Operator, apply, precompute_bias
from .pareto import ParetoArchive, pareto_filter
from .trees import as_rng

SNAPSHOTS = (0.1, 0.5, 1.0)
DEFAULT_MU = 100
BUDGET_PER_NODE = 1000


def _as_array(points) -> np.ndarray:
    return np.asarray([tuple(p) for p in points], dtype=float).reshape(-1, 2)


def nondominated_sort(points: Sequence) -> list[int]:
    """Front index of every point (0 = non-dominated)."""
    pts = _as_array(points)
    if len(pts) == 0:
        return []
    return K.nondominated_ranks(pts).tolist()


def crowding_distance(front: Sequence) -> list[float]:
    """Crowding distance within one mutually non-dominated front.

    Extremes get infinity. Repeated cost vectors count once; later copies get 0.
    """
    pts = _as_array(front)
    return K.crowding(pts, np.arange(len(pts))).tolist()


@dataclass
class Individual:
    tree: SpanningTree
    cost: CostVector
    rank: int = 0
    crowding: float = 0.0


@dataclass
class RunRecord:
    instance_id: str
    operator: str
    seed: int
    snapshots: dict[float, np.ndarray]
    snapshot_evaluations: dict[float, int]
    evaluations_used: int
    budget: int
    wall_time: float
    population: list[Individual] = field(default_factory=list, repr=False)

    @property
    def final_front(self) -> np.ndarray:
        return self.snapshots[1.0]

    def archive(self) -> ParetoArchive:
        """Non-dominated trees of the final population."""
        arch = ParetoArchive()
        for ind in self.population:
            if ind.rank == 0:
                arch.add(ind.tree, ind.cost.as_tuple())
        return arch


def default_budget(graph: Graph) -> int:
    return BUDGET_PER_NODE * graph.n


def _front(costs: np.ndarray, ranks: np.ndarray) -> np.ndarray:
    return np.asarray(pareto_filter(costs[ranks == 0]), dtype=float).reshape(-1, 2)


def run_nsga2(graph: Graph, cfg: MutationConfig, mu: int = DEFAULT_MU, budget: int | None = None,
              seed: int = 0, *, instance_id: str = "", parent_selection: str = "uniform",
              bias: EdgeBias | None = None, initial: Sequence[SpanningTree] | None = None,
              on_generation: Callable[[int, np.ndarray, np.ndarray], None] | None = None) -> RunRecord:
    """Mutation-only NSGA-II with (mu + mu) survival.

    The initial population counts towards ``budget`` (default ``1000 * n``);
    the last generation is truncated so the budget is never exceeded.
    ``parent_selection`` is ``"uniform"`` or ``"tournament"`` (binary, on
    rank then crowding). ``on_generation(evaluations, population_costs,
    ranks)`` is called after initialisation and after every generation.
    """
    if mu < 2:
        raise ValueError("mu must be at least 2")
    budget = default_budget(graph) if budget is None else int(budget)
    if budget < mu:
        raise ValueError(f"budget {budget} cannot even pay for the initial population of {mu}")
    if parent_selection not in ("uniform", "tournament"):
        raise ValueError(f"unknown parent selection {parent_selection!r}")
    op = cfg.operator
    sigma = cfg.check_sigma(graph.n)
    if op is Operator.BEX1 and bias is None:
        bias = precompute_bias(graph)
    cum = bias.cumulative if bias is not None else np.ones(1)
    rng = np.random.default_rng(seed)
    cfg = cfg.with_rng(rng)
    visited = cfg.visited(graph.n)
    args = (graph.n, graph.eu, graph.ev, graph.c1, graph.c2,
            graph.adj_ptr, graph.adj_nbr, graph.adj_eid, graph.eid)

    started = time.perf_counter()
    if initial is None:
        pop = np.stack([K.broder(graph.n, graph.adj_ptr, graph.adj_nbr, graph.adj_eid, rng)
                        for _ in range(mu)])
    else:
        if len(initial) != mu:
            raise ValueError(f"initial population has {len(initial)} trees, expected {mu}")
        pop = np.stack([np.asarray(t.edges) for t in initial])
    costs = np.column_stack([graph.c1[pop].sum(axis=1), graph.c2[pop].sum(axis=1)])
    evals = mu
    # ranks/crowding come back in survivor order
    keep, ranks, crowd = K.select_survivors(costs, mu)
    pop, costs = pop[keep], costs[keep]

    thresholds = {f: math.ceil(f * budget) for f in SNAPSHOTS}
    snaps: dict[float, np.ndarray] = {}
    snap_evals: dict[float, int] = {}

    def observe():
        for f, th in thresholds.items():
            if f not in snaps and evals >= th:
                snaps[f] = _front(costs, ranks)
                snap_evals[f] = evals
        if on_generation is not None:
            on_generation(evals, costs, ranks)

    observe()
    while evals < budget:
        k = min(mu, budget - evals)
        if parent_selection == "uniform":
            parents = rng.integers(0, mu, size=k)
        else:
            parents = K.tournament(ranks, crowd, k, rng)
        children, child_costs = K.mutate_batch(op.code, *args, cum, pop[parents], sigma,
                                               cfg.usg_min_s, cfg.force_s, cfg.use_prim,
                                               rng, visited)
        evals += k
        all_trees = np.concatenate([pop, children])
        all_costs = np.concatenate([costs, child_costs])
        keep, ranks, crowd = K.select_survivors(all_costs, mu)
        pop, costs = all_trees[keep], all_costs[keep]
        observe()
    wall = time.perf_counter() - started

    population = [Individual(SpanningTree(graph, row, validate=False),
                             CostVector(float(c[0]), float(c[1])), int(r), float(d))
                  for row, c, r, d in zip(pop, costs, ranks, crowd)]
    return RunRecord(instance_id=instance_id, operator=op.value, seed=seed, snapshots=snaps,
                     snapshot_evaluations=snap_evals, evaluations_used=evals, budget=budget,
                     wall_time=wall, population=population)


def iter_walk(graph: Graph, cfg: MutationConfig, length: int, seed=None,
              bias: EdgeBias | None = None, start: SpanningTree | None = None) -> Iterator[SpanningTree]:
    """Yield ``length + 1`` trees: a Broder tree, then each mutant of the previous one."""
    rng = as_rng(seed)
    cfg = cfg.with_rng(rng)
    if cfg.operator is Operator.BEX1 and bias is None:
        bias = precompute_bias(graph)
    if start is None:
        start = SpanningTree(graph, K.broder(graph.n, graph.adj_ptr, graph.adj_nbr,
                                             graph.adj_eid, rng), validate=False)
    tree = start
    yield tree
    for _ in range(length):
        tree = apply(tree, cfg, bias)
        yield tree


def random_walk(graph: Graph, cfg: MutationConfig, length: int, seed=None,
                bias: EdgeBias | None = None) -> list[CostVector]:
    """Cost trajectory of a walk that always accepts the mutant."""
    if length < 0:
        raise ValueError("length must be non-negative")
    return [t.cost for t in iter_walk(graph, cfg, length, seed, bias)]
