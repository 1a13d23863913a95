"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the summary lines are
also shown at the end of a full ``pytest`` run.
"""

import math
import time
from collections import defaultdict

import numpy as np
import pytest

from momst import _kernels as K
from momst import experiment as X
from momst.graph import Graph, SpanningTree
from momst.indicators import ReferenceSet, delta_p, epsilon_indicator, hypervolume
from momst.instances import CLASSES, InstanceSpec, edge_correlation, generate
from momst.mst import ScalarizedView, kruskal
from momst.mutation import MutationConfig, Operator, sigma_for, subgraph_step, unconnected_step
from momst.emoa import run_nsga2
from momst.trees import enumerate_pareto_set, enumerate_tree_edges

from conftest import ACCEPTANCE_LINES, FIG_EDGES, FIG_PARENT, brute_pareto

pytestmark = pytest.mark.acceptance


def record(k: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {k} {'PASS' if ok else 'FAIL'}: {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _batch(g: Graph, op: Operator, parents, sigma, rng, force_s=False):
    visited = np.zeros(g.n, np.int64)
    return K.mutate_batch(op.code, g.n, g.eu, g.ev, g.c1, g.c2, g.adj_ptr, g.adj_nbr, g.adj_eid,
                          g.eid, np.ones(1), parents, sigma, 1, force_s, False, rng, visited)


def _broder_pop(g: Graph, k: int, rng):
    return np.stack([K.broder(g.n, g.adj_ptr, g.adj_nbr, g.adj_eid, rng) for _ in range(k)])


# 1 -------------------------------------------------------------------------------

def test_criterion_1_pareto_beneficial():
    started = time.perf_counter()
    chains, steps = 125, 100  # 12,500 mutations per (class, n, operator)
    total = defaultdict(int)
    violations = defaultdict(int)
    for cls in CLASSES:
        for n in (10, 25):
            g = generate(InstanceSpec(cls, n, 2024 + n))
            for op in (Operator.SG, Operator.SGS, Operator.USG, Operator.USGS):
                rng = np.random.default_rng(X.stable_seed("c1", cls, n, op.value))
                sigma = n // 2 if op in (Operator.SG, Operator.SGS) else n // 2 - 1
                parents = _broder_pop(g, chains, rng)
                pc = np.column_stack([g.c1[parents].sum(1), g.c2[parents].sum(1)])
                for _ in range(steps):
                    children, cc = _batch(g, op, parents, sigma, rng)
                    worse = np.all(pc <= cc, axis=1) & np.any(pc < cc, axis=1)
                    violations[op.value] += int(worse.sum())
                    total[op.value] += len(children)
                    assert all(K.is_spanning_tree(c, g.eu, g.ev, g.n) for c in children[:5])
                    parents, pc = children, cc
    elapsed = time.perf_counter() - started
    ok = all(v == 0 for v in violations.values()) and min(total.values()) >= 100_000 and elapsed < 120
    record(1, "Pareto-beneficial sub-graph operators", ok,
           f"{dict(violations)} violations over {dict(total)} mutations in {elapsed:.1f}s")


# 2 -------------------------------------------------------------------------------

def test_criterion_2_kruskal_vs_enumeration():
    started = time.perf_counter()
    rng = np.random.default_rng(7)
    mismatches = 0
    for i in range(40):
        n = (5, 6, 7)[i % 3]
        g = generate(InstanceSpec(CLASSES[i % 4], n, int(rng.integers(1 << 31))))
        lam = float(rng.choice([0.0, 1.0, rng.random()]))
        view = ScalarizedView(g, lam)
        w = view.weights
        best = min(math.fsum(w[row]) for row in enumerate_tree_edges(g))
        mismatches += view.weight(kruskal(view)) != best
    elapsed = time.perf_counter() - started
    record(2, "Kruskal equals enumeration minimum", mismatches == 0 and elapsed < 60,
           f"{mismatches}/40 mismatches in {elapsed:.1f}s")


# 3 -------------------------------------------------------------------------------

def test_criterion_3_worked_examples():
    g = Graph(9, FIG_EDGES)
    parent = SpanningTree.from_pairs(g, FIG_PARENT)
    sg_child, nodes = subgraph_step(parent, 4, 4, 0.5)
    sg_ok = (set(nodes) == {4, 5, 7, 8} and sg_child.pairs() ==
             [(1, 2), (2, 3), (3, 5), (4, 5), (4, 8), (6, 9), (7, 8), (8, 9)])
    usg_child = unconnected_step(parent, [(1, 2), (7, 8)], 1.0)
    usg_ok = usg_child.pairs() == [(1, 2), (2, 3), (3, 5), (4, 5), (4, 7), (5, 8), (6, 9), (8, 9)]
    record(3, "worked SG and USG examples", sg_ok and usg_ok,
           f"SG nodes {sorted(nodes)} -> {sg_child.pairs()}; USG -> {usg_child.pairs()}")


# 4 -------------------------------------------------------------------------------

def test_criterion_4_runtime_regimes():
    started = time.perf_counter()
    med = {}
    for n in (100, 200, 400, 800):
        g = generate(InstanceSpec("C1", n, 4))
        rng = np.random.default_rng(n)
        tree = _broder_pop(g, 1, rng)
        for op in (Operator.SGS, Operator.USGS):
            for rule in ("log", "sqrt", "half"):
                sigma = sigma_for(rule, n)
                times = []
                for _ in range(31):  # first call discarded as warm-up
                    t0 = time.perf_counter()
                    _batch(g, op, tree, sigma, rng, force_s=True)
                    times.append(time.perf_counter() - t0)
                med[(n, op.value, rule)] = float(np.median(times[1:]))
    ratio = med[(800, "SGS", "half")] / med[(800, "SGS", "log")]
    spreads = {}
    for n in (100, 200, 400, 800):
        vals = [med[(n, "USGS", r)] for r in ("log", "sqrt", "half")]
        spreads[n] = (max(vals) - min(vals)) / min(vals)
    elapsed = time.perf_counter() - started
    ok = ratio >= 3 and all(s < 0.25 for s in spreads.values()) and elapsed < 300
    record(4, "runtime regimes", ok,
           f"SGS n=800 half/log ratio {ratio:.1f}; USGS spread "
           f"{ {n: round(s, 3) for n, s in spreads.items()} } in {elapsed:.1f}s")


# 5 -------------------------------------------------------------------------------

OPS5 = ["UNIFORM", "1BEX", "SGS", "USGS"]


def test_criterion_5_operator_ordering(tmp_path):
    started = time.perf_counter()
    paths = []
    for cls in CLASSES:
        paths += X.generate_instances(cls, 25, 10, 2023, tmp_path / "instances")
    cfg = X.ExperimentConfig(instances=paths, operators=OPS5, out_dir=tmp_path / "results", mu=100,
                             budget_multiplier=1000, repetitions=10, seed=5, sigma="half")
    results, _ = X.run_experiment(cfg, jobs=1)
    assert not [r for r in results if r.error]
    X.evaluate_results(tmp_path / "results")
    rows = [r for r in X.read_results(tmp_path / "results" / "indicators.csv") if r["snapshot"] == "1"]
    ranks = X.mean_ranks(rows, "hv")

    hv = defaultdict(list)
    for r in rows:
        hv[(r["class"], r["instance"], r["operator"])].append(float(r["hv"]))
    details, ok = [], True
    for cls in CLASSES:
        mr = {op: ranks[(cls, op, "1")][0] for op in OPS5}
        order_ok = mr["USGS"] <= mr["SGS"] < mr["1BEX"] < mr["UNIFORM"]
        instances = sorted({inst for (c, inst, _) in hv if c == cls})
        wins = sum(np.median(hv[(cls, i, "USGS")]) < np.median(hv[(cls, i, "1BEX")]) for i in instances)
        ok &= order_ok and wins >= 8
        details.append(f"{cls} ranks " + "/".join(f"{op}={mr[op]:.2f}" for op in OPS5) + f" wins {wins}/10")
    elapsed = time.perf_counter() - started
    ok &= elapsed < 1800
    record(5, "operator ordering by HV rank", ok, "; ".join(details) + f" ({elapsed:.0f}s)")


# 6 -------------------------------------------------------------------------------

def test_criterion_6_1ex_noop_rate():
    g = Graph.complete_graph(10)
    rng = np.random.default_rng(6)
    parents = _broder_pop(g, 1000, rng)
    noops = trials = 0
    for _ in range(100):
        children, _ = _batch(g, Operator.EX1, parents, 0, rng)
        noops += int(np.all(children == parents, axis=1).sum())
        trials += len(children)
        parents = children
    rate = noops / trials
    record(6, "1EX no-op rate", trials == 100_000 and abs(rate - 0.2) <= 0.01,
           f"{noops}/{trials} = {rate:.4f} (expected 0.2 +/- 0.01)")


# 7 -------------------------------------------------------------------------------

def _eps_direct(a, r):
    return max(0.0, max(min(max(x[0] - y[0], x[1] - y[1]) for x in a) for y in r))


def _dp_direct(a, r, p):
    def dist(x, y):
        return math.hypot(x[0] - y[0], x[1] - y[1])
    gd = (sum(min(dist(x, y) for y in r) ** p for x in a) / len(a)) ** (1 / p)
    igd = (sum(min(dist(x, y) for x in a) ** p for y in r) / len(r)) ** (1 / p)
    return max(gd, igd)


def test_criterion_7_indicator_oracles():
    rng = np.random.default_rng(77)
    hv_err = 0.0
    for i in range(10):
        pts = np.asarray(brute_pareto(map(tuple, rng.uniform(0, 1, size=(25, 2)))))
        exact = hypervolume(pts)
        box = rng.uniform(0, 1.1, size=(1_000_000, 2))
        dom = np.zeros(len(box), bool)
        for p in pts:
            dom |= (box[:, 0] >= p[0]) & (box[:, 1] >= p[1])
        hv_err = max(hv_err, abs(dom.mean() * 1.21 - exact) / exact)
    eps_err = dp_err = 0.0
    for _ in range(100):
        ref = ReferenceSet.from_points(brute_pareto(map(tuple, rng.uniform(0, 50, size=(12, 2)))))
        approx = rng.uniform(0, 50, size=(int(rng.integers(1, 12)), 2))
        a, r = ref.normalize(approx).tolist(), ref.normalized.tolist()
        eps_err = max(eps_err, abs(epsilon_indicator(approx, ref) - _eps_direct(a, r)))
        for p in (1, 2, 5):
            dp_err = max(dp_err, abs(delta_p(approx, ref, p) - _dp_direct(a, r, p)))
    ok = hv_err <= 0.005 and eps_err <= 1e-12 and dp_err <= 1e-12
    record(7, "indicator oracles", ok,
           f"HV rel. error {hv_err:.2e}; eps error {eps_err:.1e}; delta_p error {dp_err:.1e}")


# 8 -------------------------------------------------------------------------------

def test_criterion_8_small_front_recovery():
    started = time.perf_counter()
    summary, ok = [], True
    for cls in CLASSES:
        hits, missing = 0, []
        for seed in range(10):
            g = generate(InstanceSpec(cls, 6, 600 + seed))
            front, _ = enumerate_pareto_set(g)
            rec = run_nsga2(g, MutationConfig("USGS", sigma=sigma_for("half", 6)), seed=seed)
            eps = epsilon_indicator(rec.final_front, ReferenceSet.from_points(front))
            hits += eps == 0.0
            missing.append(len({tuple(p) for p in front.tolist()} - {tuple(p) for p in rec.final_front.tolist()}))
        ok &= hits >= 9
        summary.append(f"{cls} {hits}/10 (missed points per seed {missing})")
    record(8, "n=6 front recovery with USGS", ok,
           "; ".join(summary) + f" ({time.perf_counter() - started:.0f}s)")


# 9 -------------------------------------------------------------------------------

def test_criterion_9_instance_statistics():
    c1_ok = True
    worst = {"C3": 0.0, "C4": 0.0}
    count = 0
    for n in (25, 50, 100):
        for seed in range(20):
            g = generate(InstanceSpec("C1", n, seed))
            c1_ok &= bool(g.c1.min() >= 10 and g.c1.max() <= 100 and g.c2.min() >= 10 and g.c2.max() <= 50)
            for cls, target in (("C3", -0.95), ("C4", 0.95)):
                rho = edge_correlation(generate(InstanceSpec(cls, n, seed)))
                worst[cls] = max(worst[cls], abs(rho - target))
                count += 1
    ok = c1_ok and max(worst.values()) <= 0.03
    record(9, "instance class statistics", ok,
           f"C1 bounds {'held' if c1_ok else 'violated'}; worst |rho - target| over {count} "
           f"instances: C3 {worst['C3']:.4f}, C4 {worst['C4']:.4f}")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-v"]))
