"""Benchmark instance classes C1-C4 and the ``.momst`` file format.

File layout (UTF-8, LF, whitespace separated)::

    momst 1
    n m q complete
    u v c1 c2        # m lines, 1-based endpoints

Costs are written as integers when integral and as shortest round-trip
decimals otherwise.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graph import Graph, GraphError

CLASSES = ("C1", "C2", "C3", "C4")
MAGIC = "momst 1"
RHO_TOLERANCE = 0.03
DEFAULT_RHO = {"C3": -0.95, "C4": 0.95}

_BISECTION_STEPS = 20
_ATTEMPTS = 25


class GenerationError(RuntimeError):
    def __init__(self, message: str, achieved_rho: float):
        super().__init__(f"{message} (achieved rho={achieved_rho:.4f})")
        self.achieved_rho = achieved_rho


class InstanceParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class InstanceSpec:
    class_id: str
    n: int
    seed: int
    target_rho: float | None = None

    def __post_init__(self):
        if self.class_id not in CLASSES:
            raise ValueError(f"unknown class {self.class_id!r}; expected one of {CLASSES}")
        if self.n < 3:
            raise ValueError(f"n must be >= 3, got {self.n}")

    @property
    def rho(self) -> float | None:
        if self.class_id not in DEFAULT_RHO:
            return None
        return DEFAULT_RHO[self.class_id] if self.target_rho is None else self.target_rho


def round_half_away(x):
    return np.copysign(np.floor(np.abs(x) + 0.5), x)


def _pearson(a, b) -> float:
    if np.std(a) == 0 or np.std(b) == 0:
        return 0.0
    return float(np.corrcoef(a, b)[0, 1])


def _euclidean_costs(n: int, rng: np.random.Generator):
    """Rounded pairwise distances of uniform points in [0, 100]^2, all >= 1."""
    u, v = np.triu_indices(n, 1)
    while True:
        pts = rng.uniform(0.0, 100.0, size=(n, 2))
        d = round_half_away(np.hypot(*(pts[u] - pts[v]).T))
        if np.all(d >= 1):
            return u, v, d


def _calibrated(c1: np.ndarray, base: np.ndarray, target: float, seed_seq: np.random.SeedSequence):
    """``max(1, round(base + s*z))`` with the noise scale s bisected towards ``target`` rho.

    Each attempt draws one standard-normal vector z from its own sub-seed and
    bisects s with z held fixed, so rho(s) is a deterministic function.
    """
    best = None
    for child in seed_seq.spawn(_ATTEMPTS):
        z = np.random.default_rng(child).standard_normal(len(c1))

        def realise(s):
            c2 = np.maximum(1.0, round_half_away(base + s * z))
            return c2, _pearson(c1, c2)

        lo, hi = 0.0, 4.0 * float(np.std(c1)) + 1.0
        # |rho| shrinks as s grows; widen until the target is bracketed
        while abs(realise(hi)[1]) > abs(target) and hi < 1e6:
            hi *= 2
        c2, rho = realise(hi)
        for _ in range(_BISECTION_STEPS):
            mid = 0.5 * (lo + hi)
            c2, rho = realise(mid)
            if abs(rho - target) <= RHO_TOLERANCE / 4:
                break
            if abs(rho) > abs(target):
                lo = mid
            else:
                hi = mid
        if best is None or abs(rho - target) < abs(best[1] - target):
            best = (c2, rho)
        if abs(rho - target) <= RHO_TOLERANCE:
            return c2
    raise GenerationError(f"could not reach rho={target} +/- {RHO_TOLERANCE}", best[1])


def generate(spec: InstanceSpec) -> Graph:
    """Complete benchmark graph for ``spec``; deterministic in (class, n, seed, rho)."""
    n = spec.n
    root = np.random.SeedSequence([spec.seed & 0xFFFFFFFFFFFFFFFF, CLASSES.index(spec.class_id)])
    point_seq, noise_seq = root.spawn(2)
    rng = np.random.default_rng(point_seq)
    if spec.class_id == "C1":
        u, v = np.triu_indices(n, 1)
        c1 = rng.integers(10, 101, size=len(u)).astype(float)
        c2 = rng.integers(10, 51, size=len(u)).astype(float)
        return Graph.from_arrays(n, u, v, c1, c2, complete=True)

    u, v, c1 = _euclidean_costs(n, rng)
    if spec.class_id == "C2":
        # quarter circle of radius max(c1): short edges get long second costs
        radius = c1.max()
        noise = np.random.default_rng(noise_seq).integers(0, 6, size=len(c1))
        c2 = np.maximum(1.0, round_half_away(np.sqrt(np.maximum(radius**2 - c1**2, 0.0))) + noise)
    elif spec.class_id == "C3":
        c2 = _calibrated(c1, c1.max() + c1.min() - c1, spec.rho, noise_seq)
    else:
        c2 = _calibrated(c1, c1.copy(), spec.rho, noise_seq)
    return Graph.from_arrays(n, u, v, c1, c2, complete=True)


def edge_correlation(graph: Graph) -> float:
    return _pearson(graph.c1, graph.c2)


def format_number(x: float) -> str:
    """Integral values as integers, everything else as the shortest round-trip repr."""
    if float(x).is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def dumps(graph: Graph) -> str:
    lines = [MAGIC, f"{graph.n} {graph.m} 2 {int(graph.complete)}"]
    for a, b, x, y in zip(graph.eu, graph.ev, graph.c1, graph.c2):
        lines.append(f"{a + 1} {b + 1} {format_number(x)} {format_number(y)}")
    return "\n".join(lines) + "\n"


def write_instance(graph: Graph, path) -> None:
    """Write atomically (temp file in the target directory, then rename)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dumps(graph))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def loads(text: str) -> Graph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].strip() != MAGIC:
        raise InstanceParseError(f"expected header {MAGIC!r}", 1)
    if len(lines) < 2:
        raise InstanceParseError("missing size line", 2)
    parts = lines[1].split()
    try:
        n, m, q, complete = (int(x) for x in parts)
    except ValueError:
        raise InstanceParseError(f"expected 'n m q complete', got {lines[1]!r}", 2) from None
    if q != 2:
        raise InstanceParseError(f"only q=2 objectives are supported, got {q}", 2)
    if complete not in (0, 1):
        raise InstanceParseError("complete flag must be 0 or 1", 2)
    if complete and m != n * (n - 1) // 2:
        raise InstanceParseError(f"complete flag set but m={m} != n(n-1)/2", 2)
    body = lines[2:]
    if len(body) != m:
        raise InstanceParseError(f"expected {m} edge lines, found {len(body)}", 3 + min(len(body), m))
    rows = np.empty((m, 4))
    for i, line in enumerate(body):
        parts = line.split()
        try:
            if len(parts) != 4:
                raise ValueError
            a, b = int(parts[0]), int(parts[1])
            rows[i] = (a, b, float(parts[2]), float(parts[3]))
        except ValueError:
            raise InstanceParseError(f"malformed edge line {line!r}", i + 3) from None
    try:
        graph = Graph.from_arrays(n, rows[:, 0].astype(np.int64) - 1, rows[:, 1].astype(np.int64) - 1,
                                  rows[:, 2], rows[:, 3], complete=bool(complete))
    except GraphError as exc:
        msg = str(exc)
        line = 2
        if msg.startswith("edge "):
            line = int(msg.split(":")[0].split()[1]) + 3
        raise InstanceParseError(msg, line) from None
    return graph


def read_instance(path) -> Graph:
    return loads(Path(path).read_text(encoding="utf-8"))
