"""``momst`` command line: generate, run, walk, analyze, eval."""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from pathlib import Path

from . import experiment as X
from .emoa import iter_walk
from .indicators import edge_frequency, nnce_matrix
from .instances import CLASSES, read_instance
from .mst import SWEEP_WEIGHTS_ANALYSIS, SWEEP_WEIGHTS_BASELINE, weighted_sum_sweep
from .mutation import MutationConfig, Operator, sigma_for

log = logging.getLogger("momst")

OPERATOR_NAMES = [op.value for op in Operator]


def _n_arg(text: str) -> int:
    n = int(text)
    if n < 3:
        raise argparse.ArgumentTypeError(f"n must be >= 3, got {n}")
    return n


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _p_arg(text: str) -> float:
    p = math.inf if text.lower() in ("inf", "infinity") else float(text)
    if not p >= 1:
        raise argparse.ArgumentTypeError(f"p must be >= 1, got {text}")
    return p


def _operator(text: str) -> Operator:
    try:
        return Operator.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _expand(paths: list[str]) -> list[Path]:
    out = []
    for p in map(Path, paths):
        out.extend(sorted(p.glob("*.momst")) if p.is_dir() else [p])
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="momst", description=__doc__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write benchmark instances")
    g.add_argument("--class", dest="class_id", required=True, choices=CLASSES)
    g.add_argument("--n", type=_n_arg, required=True)
    g.add_argument("--count", type=_positive, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--rho", type=float, default=None, help="target correlation for C3/C4")
    g.add_argument("--out", type=Path, default=Path("instances"))

    r = sub.add_parser("run", help="run NSGA-II on instances")
    r.add_argument("instances", nargs="+", help="instance files or directories")
    r.add_argument("--operators", nargs="+", type=_operator,
                   default=[Operator.UNIFORM, Operator.BEX1, Operator.SGS, Operator.USGS],
                   metavar="OP", help=f"any of {', '.join(OPERATOR_NAMES)}")
    r.add_argument("--sigma", default="half", help="int, or half/logsq/log/sqrt of n")
    r.add_argument("--mu", type=_positive, default=100)
    r.add_argument("--budget-multiplier", type=_positive, default=1000)
    r.add_argument("--reps", type=_positive, default=30)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--selection", choices=("uniform", "tournament"), default="uniform")
    r.add_argument("--usg-min-s", type=int, choices=(1, 3), default=1)
    r.add_argument("--jobs", type=_positive, default=os.cpu_count() or 1)
    r.add_argument("--out", type=Path, default=Path("results"))

    w = sub.add_parser("walk", help="random walk without selection")
    w.add_argument("instance", type=Path)
    w.add_argument("--operator", type=_operator, default=Operator.USGS)
    w.add_argument("--sigma", default="half")
    w.add_argument("--length", type=int, default=100)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--out", type=Path, default=None, help="CSV path (default: stdout)")

    a = sub.add_parser("analyze", help="NNCE matrix and edge frequencies of the sweep archive")
    a.add_argument("instance", type=Path)
    a.add_argument("--weights", type=_positive, default=SWEEP_WEIGHTS_ANALYSIS)
    a.add_argument("--out", type=Path, default=Path("analysis"))

    e = sub.add_parser("eval", help="indicators and mean ranks for a results directory")
    e.add_argument("results", type=Path)
    e.add_argument("--p", type=_p_arg, default=2.0, help="delta_p exponent (number or inf)")
    e.add_argument("--sweep-weights", type=int, default=SWEEP_WEIGHTS_BASELINE,
                   help="weights of the reference sweep; 0 uses run fronts only")
    return parser


def cmd_generate(args) -> int:
    paths = X.generate_instances(args.class_id, args.n, args.count, args.seed, args.out, args.rho)
    for p in paths:
        print(p)
    return 0


def cmd_run(args) -> int:
    cfg = X.ExperimentConfig(instances=_expand(args.instances), operators=args.operators,
                             out_dir=args.out, mu=args.mu, budget_multiplier=args.budget_multiplier,
                             repetitions=args.reps, seed=args.seed, sigma=args.sigma,
                             parent_selection=args.selection, usg_min_s=args.usg_min_s)
    results, path = X.run_experiment(cfg, jobs=args.jobs)
    failed = [r for r in results if r.error]
    for r in failed:
        print(f"error: {r.job.key}: {r.error}", file=sys.stderr)
    print(f"{len(results) - len(failed)} jobs done, {len(failed)} failed; results in {path}")
    return 1 if failed else 0


def _config(op: Operator, sigma_rule: str, n: int) -> MutationConfig:
    return MutationConfig(op, sigma=sigma_for(sigma_rule, n) if op.is_subgraph else None)


def cmd_walk(args) -> int:
    if args.length < 0:
        raise ValueError("--length must be non-negative")
    graph = read_instance(args.instance)
    cfg = _config(args.operator, args.sigma, graph.n)
    rows = ([i, t.cost.c1, t.cost.c2]
            for i, t in enumerate(iter_walk(graph, cfg, args.length, args.seed)))
    text = X._csv_text(["step", "c1", "c2"], rows)
    if args.out is None:
        sys.stdout.write(text)
    else:
        X.atomic_write(args.out, text)
    return 0


def cmd_analyze(args) -> int:
    graph = read_instance(args.instance)
    archive = weighted_sum_sweep(graph, args.weights)
    trees = archive.trees
    matrix = nnce_matrix(trees)
    k = len(trees)
    X.atomic_write(args.out / "front.csv", X._csv_text(
        ["index", "c1", "c2"], ([i, t.cost.c1, t.cost.c2] for i, t in enumerate(trees))))
    X.atomic_write(args.out / "nnce.csv", X._csv_text(
        ["index"] + [str(i) for i in range(k)],
        ([i] + [float(x) for x in matrix[i]] for i in range(k))))
    freq = edge_frequency(archive)
    X.atomic_write(args.out / "edge_frequency.csv", X._csv_text(
        ["u", "v", "c1", "c2", "frequency"],
        ([int(graph.eu[e]) + 1, int(graph.ev[e]) + 1, float(graph.c1[e]), float(graph.c2[e]),
          float(freq[e])] for e in range(graph.m))))
    print(f"{k} supported trees; output in {args.out}")
    return 0


def cmd_eval(args) -> int:
    ind, ranks = X.evaluate_results(args.results, p=args.p, sweep_weights=args.sweep_weights)
    print(f"wrote {ind} and {ranks}")
    return 0


COMMANDS = {"generate": cmd_generate, "run": cmd_run, "walk": cmd_walk,
            "analyze": cmd_analyze, "eval": cmd_eval}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (OSError, ValueError) as exc:
        print(f"momst {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
