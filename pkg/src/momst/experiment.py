"""Batch experiment harness: instance generation, EMOA runs, indicator evaluation.

Every job derives its seed from the master seed and a stable hash of the job
key, so results do not depend on job order or on the number of workers.
Outputs are written atomically; a job whose row file exists is skipped on a
re-run.
"""

from __future__ import annotations

import csv
import hashlib
import io
import logging
import os
import re
import tempfile
import traceback
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import rankdata

from .emoa import SNAPSHOTS, run_nsga2
from .indicators import INDICATORS, build_reference_set, delta_p
from .instances import CLASSES, InstanceSpec, format_number, generate, read_instance, write_instance
from .mst import SWEEP_WEIGHTS_BASELINE
from .mutation import MutationConfig, Operator, sigma_for

log = logging.getLogger(__name__)

SCHEMA = "# momst-results v1"
RESULT_FIELDS = ["instance", "class", "n", "operator", "sigma", "rep", "seed", "snapshot",
                 "evaluations", "evaluations_used", "wall_time", "front_file", "front_size",
                 "status", "message"]
INDICATOR_FIELDS = ["instance", "class", "operator", "rep", "snapshot", "hv", "eps", "delta_p"]
RANK_FIELDS = ["class", "operator", "snapshot", "indicator", "mean_rank", "runs"]

_NAME = re.compile(r"^(C\d+)_(\d+)_(\d+)$")


def stable_seed(*parts) -> int:
    """63-bit seed from a platform-independent hash of ``parts``."""
    text = "\x1f".join(str(p) for p in parts).encode()
    return int.from_bytes(hashlib.blake2b(text, digest_size=8).digest(), "little") >> 1


def atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header: Sequence[str], rows: Iterable[Sequence], comment: str | None = None) -> str:
    buf = io.StringIO()
    if comment:
        buf.write(comment + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_number(x) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def _read_csv(path: Path) -> list[dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def write_front(path: Path, front) -> None:
    atomic_write(path, _csv_text(["c1", "c2"], ((float(a), float(b)) for a, b in front)))


def read_front(path: Path) -> np.ndarray:
    rows = _read_csv(path)
    return np.asarray([(float(r["c1"]), float(r["c2"])) for r in rows], dtype=float).reshape(-1, 2)


def instance_class(path) -> str:
    m = _NAME.match(Path(path).stem)
    return m.group(1) if m else "unknown"


# --- generation -------------------------------------------------------------

def generate_instances(class_id: str, n: int, count: int, seed: int, out_dir,
                       rho: float | None = None) -> list[Path]:
    """Write ``count`` instances named ``{class}_{n}_{index}.momst`` (index from 1)."""
    paths = []
    for idx in range(1, count + 1):
        spec = InstanceSpec(class_id, n, stable_seed(seed, class_id, n, idx), rho)
        path = Path(out_dir) / f"{class_id}_{n}_{idx}.momst"
        write_instance(generate(spec), path)
        paths.append(path)
    return paths


# --- runs -------------------------------------------------------------------

@dataclass
class ExperimentConfig:
    instances: list[Path]
    operators: list[Operator]
    out_dir: Path
    mu: int = 100
    budget_multiplier: int = 1000
    repetitions: int = 30
    seed: int = 0
    sigma: str = "half"
    parent_selection: str = "uniform"
    usg_min_s: int = 1

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.budget_multiplier < 1:
            raise ValueError("budget multiplier must be >= 1")
        self.operators = [Operator.parse(op) for op in self.operators]
        self.instances = [Path(p).resolve() for p in self.instances]
        self.out_dir = Path(self.out_dir)


@dataclass(frozen=True)
class Job:
    instance: Path
    operator: Operator
    rep: int
    seed: int

    @property
    def key(self) -> str:
        return f"{self.instance.stem}__{self.operator.value}__r{self.rep}"


@dataclass
class JobResult:
    job: Job
    rows: list[list] = field(default_factory=list)
    error: str | None = None


def plan_jobs(cfg: ExperimentConfig) -> list[Job]:
    return [Job(inst, op, rep, stable_seed(cfg.seed, inst.stem, op.value, rep))
            for inst in cfg.instances for op in cfg.operators for rep in range(1, cfg.repetitions + 1)]


def _snapshot_label(f: float) -> str:
    return f"{int(round(f * 100))}"


def execute_job(job: Job, cfg: ExperimentConfig) -> JobResult:
    """Run one job and write its front files and row file; errors are captured."""
    row_file = cfg.out_dir / "jobs" / f"{job.key}.csv"
    try:
        graph = read_instance(job.instance)
        op = job.operator
        sigma = sigma_for(cfg.sigma, graph.n) if op.is_subgraph else None
        mcfg = MutationConfig(op, sigma=sigma, usg_min_s=cfg.usg_min_s)
        rec = run_nsga2(graph, mcfg, mu=cfg.mu, budget=cfg.budget_multiplier * graph.n,
                        seed=job.seed, instance_id=job.instance.stem,
                        parent_selection=cfg.parent_selection)
        rows = []
        for f in SNAPSHOTS:
            rel = Path("fronts") / f"{job.key}__{_snapshot_label(f)}.csv"
            write_front(cfg.out_dir / rel, rec.snapshots[f])
            rows.append([str(job.instance), instance_class(job.instance), graph.n, op.value,
                         "" if sigma is None else sigma, job.rep, job.seed, f,
                         rec.snapshot_evaluations[f], rec.evaluations_used, rec.wall_time,
                         rel.as_posix(), len(rec.snapshots[f]), "ok", ""])
        atomic_write(row_file, _csv_text(RESULT_FIELDS, rows))
        return JobResult(job, rows)
    except Exception as exc:  # recorded per job; the batch continues
        log.debug("job %s failed\n%s", job.key, traceback.format_exc())
        return JobResult(job, error=f"{type(exc).__name__}: {exc}")


def _error_row(res: JobResult) -> list:
    j = res.job
    return [str(j.instance), instance_class(j.instance), "", j.operator.value, "", j.rep, j.seed,
            "", "", "", "", "", "", "error", res.error]


def run_experiment(cfg: ExperimentConfig, jobs: int | None = None) -> tuple[list[JobResult], Path]:
    """Run all pending jobs and (re)write ``results.csv``; returns this call's results."""
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    planned = plan_jobs(cfg)
    pending = [j for j in planned if not (cfg.out_dir / "jobs" / f"{j.key}.csv").exists()]
    log.info("%d jobs planned, %d pending", len(planned), len(pending))
    workers = max(1, jobs or os.cpu_count() or 1)
    if workers == 1 or len(pending) <= 1:
        results = [execute_job(j, cfg) for j in pending]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(execute_job, pending, [cfg] * len(pending)))

    failed = {r.job.key: r for r in results if r.error is not None}
    rows = []
    for j in planned:
        row_file = cfg.out_dir / "jobs" / f"{j.key}.csv"
        if j.key in failed:
            rows.append(_error_row(failed[j.key]))
        elif row_file.exists():
            rows.extend([r[k] for k in RESULT_FIELDS] for r in _read_csv(row_file))
    path = cfg.out_dir / "results.csv"
    atomic_write(path, _csv_text(RESULT_FIELDS, rows, SCHEMA))
    return results, path


def read_results(path) -> list[dict[str, str]]:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
    if first != SCHEMA:
        raise ValueError(f"{path}: missing schema line {SCHEMA!r}")
    return _read_csv(path)


# --- evaluation -------------------------------------------------------------

def mean_ranks(records: Sequence[dict], indicator: str) -> dict[tuple[str, str, str], tuple[float, int]]:
    """Rank runs within each (instance, snapshot) by ``indicator`` (1 = best, ties averaged),
    then average per (class, operator, snapshot)."""
    groups = defaultdict(list)
    for r in records:
        groups[(r["instance"], r["snapshot"])].append(r)
    acc = defaultdict(list)
    for rows in groups.values():
        ranks = rankdata([float(r[indicator]) for r in rows], method="average")
        for r, rk in zip(rows, ranks):
            acc[(r["class"], r["operator"], r["snapshot"])].append(float(rk))
    return {k: (float(np.mean(v)), len(v)) for k, v in acc.items()}


def evaluate_results(results_dir, p: float = 2.0,
                     sweep_weights: int = SWEEP_WEIGHTS_BASELINE) -> tuple[Path, Path]:
    """Write ``indicators.csv`` and ``ranks.csv`` next to ``results.csv``.

    The reference set of an instance is the non-dominated union of a
    weighted-sum sweep and every front recorded for that instance.
    """
    results_dir = Path(results_dir)
    rows = [r for r in read_results(results_dir / "results.csv") if r["status"] == "ok"]
    if not rows:
        raise ValueError(f"{results_dir / 'results.csv'} contains no successful runs")
    fronts = {r["front_file"]: read_front(results_dir / r["front_file"]) for r in rows}
    by_instance = defaultdict(list)
    for r in rows:
        by_instance[r["instance"]].append(r)

    records = []
    for inst, inst_rows in by_instance.items():
        graph = read_instance(inst) if sweep_weights else None
        ref = build_reference_set(graph, (fronts[r["front_file"]] for r in inst_rows), sweep_weights)
        for r in inst_rows:
            front = fronts[r["front_file"]]
            values = {name: fn(front, ref) for name, fn in INDICATORS.items() if name != "delta_p"}
            values["delta_p"] = delta_p(front, ref, p)
            records.append({"instance": inst, "class": r["class"], "operator": r["operator"],
                            "rep": r["rep"], "snapshot": r["snapshot"], **values})

    ind_path = results_dir / "indicators.csv"
    atomic_write(ind_path, _csv_text(INDICATOR_FIELDS, ([rec[k] for k in INDICATOR_FIELDS]
                                                        for rec in records), SCHEMA))
    rank_rows = []
    for name in INDICATORS:
        for (cls, op, snap), (mean, count) in sorted(mean_ranks(records, name).items()):
            rank_rows.append([cls, op, snap, name, mean, count])
    rank_path = results_dir / "ranks.csv"
    atomic_write(rank_path, _csv_text(RANK_FIELDS, rank_rows, SCHEMA))
    return ind_path, rank_path


__all__ = ["CLASSES", "ExperimentConfig", "Job", "JobResult", "SCHEMA", "atomic_write",
           "evaluate_results", "execute_job", "generate_instances", "instance_class", "mean_ranks",
           "plan_jobs", "read_front", "read_results", "run_experiment", "stable_seed", "write_front"]
