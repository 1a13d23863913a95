"""Quality indicators, NNCE and edge-frequency analysis.

All indicators work in a normalised objective space: the reference set's
ideal point maps to 0 and its nadir to 1 in each objective. The hypervolume
reference point is (1.1, 1.1) in that space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph, SpanningTree
from .mst import SWEEP_WEIGHTS_BASELINE, ContractError, weighted_sum_sweep
from .pareto import ParetoArchive, pareto_filter

HV_REFERENCE = (1.1, 1.1)


def _points(points) -> np.ndarray:
    if isinstance(points, np.ndarray):
        return points.astype(float).reshape(-1, 2)
    return np.asarray([tuple(p) for p in points], dtype=float).reshape(-1, 2)


@dataclass(frozen=True)
class ReferenceSet:
    points: np.ndarray
    ideal: np.ndarray
    nadir: np.ndarray

    @classmethod
    def from_points(cls, points) -> "ReferenceSet":
        front = _points(pareto_filter(_points(points)))
        if len(front) == 0:
            raise ValueError("reference set needs at least one point")
        front.flags.writeable = False
        ideal, nadir = front.min(axis=0), front.max(axis=0)
        ideal.flags.writeable = False
        nadir.flags.writeable = False
        return cls(front, ideal, nadir)

    @property
    def scale(self) -> np.ndarray:
        span = self.nadir - self.ideal
        return np.where(span > 0, span, 1.0)

    def normalize(self, points) -> np.ndarray:
        return (_points(points) - self.ideal) / self.scale

    @property
    def normalized(self) -> np.ndarray:
        return self.normalize(self.points)

    def __len__(self) -> int:
        return len(self.points)


def _as_ref(ref) -> ReferenceSet:
    return ref if isinstance(ref, ReferenceSet) else ReferenceSet.from_points(ref)


def hypervolume(points, reference_point=HV_REFERENCE) -> float:
    """Area dominated by ``points`` and bounded by ``reference_point`` (minimisation)."""
    pts = _points(points)
    rx, ry = reference_point
    pts = pts[(pts[:, 0] < rx) & (pts[:, 1] < ry)]
    if len(pts) == 0:
        return 0.0
    front = pareto_filter(pts)
    area = 0.0
    for i, (x, y) in enumerate(front):
        nxt = front[i + 1][0] if i + 1 < len(front) else rx
        area += (nxt - x) * (ry - y)
    return area


def hypervolume_indicator(approx, ref) -> float:
    """HV of the reference set minus HV of ``approx``, clipped at 0."""
    ref = _as_ref(ref)
    gap = hypervolume(ref.normalized) - hypervolume(ref.normalize(approx))
    return max(0.0, gap)


def epsilon_indicator(approx, ref) -> float:
    """Additive unary epsilon, clipped at 0; infinite for an empty approximation."""
    ref = _as_ref(ref)
    a = ref.normalize(approx)
    if len(a) == 0:
        return math.inf
    r = ref.normalized
    shift = np.max(a[None, :, :] - r[:, None, :], axis=2)
    return max(0.0, float(shift.min(axis=1).max()))


def _mean_power(d: np.ndarray, p: float) -> float:
    if math.isinf(p):
        return float(d.max())
    return float(np.mean(d ** p) ** (1.0 / p))


def delta_p(approx, ref, p: float = 2.0) -> float:
    """``max(GD_p, IGD_p)`` with Euclidean distances; ``p=inf`` gives the Hausdorff distance."""
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    ref = _as_ref(ref)
    a = ref.normalize(approx)
    if len(a) == 0:
        return math.inf
    r = ref.normalized
    dist = np.sqrt(((a[:, None, :] - r[None, :, :]) ** 2).sum(axis=2))
    gd = _mean_power(dist.min(axis=1), p)
    igd = _mean_power(dist.min(axis=0), p)
    return max(gd, igd)


INDICATORS = {
    "hv": hypervolume_indicator,
    "eps": epsilon_indicator,
    "delta_p": delta_p,
}


def build_reference_set(graph: Graph | None, approximations: Iterable = (),
                        weights: int = SWEEP_WEIGHTS_BASELINE) -> ReferenceSet:
    """Non-dominated union of a weighted-sum sweep (skipped if ``weights`` is 0) and the approximations."""
    pts: list[tuple[float, float]] = []
    if graph is not None and weights:
        pts.extend(weighted_sum_sweep(graph, weights).costs())
    for approx in approximations:
        pts.extend(map(tuple, _points(approx)))
    return ReferenceSet.from_points(pts)


def nnce(t1: SpanningTree, t2: SpanningTree) -> float:
    """Share of ``t1``'s edges that ``t2`` also contains."""
    if t1.host is not t2.host and not t1.host.structurally_equal(t2.host):
        raise ContractError("trees live on different host graphs")
    if len(t1.edges) == 0:
        return 1.0
    common = np.intersect1d(t1.edges, t2.edges, assume_unique=True)
    return len(common) / len(t1.edges)


def nnce_matrix(trees: Sequence[SpanningTree]) -> np.ndarray:
    k = len(trees)
    out = np.ones((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            out[i, j] = out[j, i] = nnce(trees[i], trees[j])
    return out


def edge_frequency(archive: ParetoArchive | Sequence[SpanningTree]) -> np.ndarray:
    """Per-edge fraction of archive trees containing that edge (indexed like the host's edges)."""
    trees = list(archive.trees if isinstance(archive, ParetoArchive) else archive)
    if not trees:
        raise ValueError("edge_frequency needs a non-empty archive")
    host = trees[0].host
    counts = np.zeros(host.m)
    for t in trees:
        counts[t.edges] += 1
    return counts / len(trees)
