"""Exit criteria for the build, one test per criterion.

Each test records a PASS/WARN/FAIL line that is printed in the pytest
terminal summary. Real datasets are looked up in ``$GOTCENTRALITY_DATA``
(default ``tests/data``): ``dolphins.gml``, ``hep-th.gml`` and
``as-22july06.gml``.
"""

import math
import os
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import ACCEPTANCE
from gotcentrality.centrality import betweenness_centrality
from gotcentrality.generators import gen_ba_tf, gen_er, gen_nws
from gotcentrality.got import GotConfig, default_epochs, run_got
from gotcentrality.graph import Graph, connected_components
from gotcentrality.graph_io import load_graph
from gotcentrality.harness import Cell, ExperimentSpec, run_cell, run_experiment
from gotcentrality.stats import kendall
from oracles import brute_force_betweenness, quadratic_kendall

pytestmark = pytest.mark.slow

DATA_DIR = Path(os.environ.get("GOTCENTRALITY_DATA", Path(__file__).parent / "data"))


def record(key, ok, detail, status=None):
    ACCEPTANCE[key] = (status or ("PASS" if ok else "FAIL"), detail)
    assert ok, detail


def test_01_conservation():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    violations = 0
    epochs_checked = 0
    for run in range(100):
        v = (50, 200, 1000)[run % 3]
        model = ("er", "nws", "ba_tf")[(run // 3) % 3]
        seed = int(rng.integers(2**63))
        if model == "er":
            g = gen_er(v, 0.01 if v == 1000 else 6 / v, seed)
        elif model == "nws":
            g = gen_nws(v, 6, 0.6, seed)
        else:
            g = gen_ba_tf(v, 5, 0.3, seed)
        expected = v * v  # default Φ0 = |V|

        def check(ep, phi, loaded):
            nonlocal violations, epochs_checked
            epochs_checked += 1
            if int(phi.sum()) + loaded != expected or phi.min() < 0:
                violations += 1

        run_got(g, GotConfig(seed=seed + 1), on_epoch=check)
    elapsed = time.perf_counter() - start
    record("1 conservation", violations == 0 and elapsed < 60,
           f"{violations} violations over {epochs_checked} epochs in 100 runs, {elapsed:.1f}s")


def test_02_betweenness_oracle():
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    worst = 0.0
    for i in range(200):
        n = int(rng.integers(2, 9))
        p = (0.2, 0.5, 0.8)[i % 3]
        edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p]
        g = Graph.from_edges(n, edges)
        ref = np.array([float(x) for x in brute_force_betweenness(n, edges)])
        worst = max(worst, float(np.abs(betweenness_centrality(g).scores - ref).max(initial=0)))
    elapsed = time.perf_counter() - start
    record("2 betweenness oracle", worst <= 1e-9 and elapsed < 60,
           f"max |Brandes - enumeration| = {worst:.2e} on 200 graphs, {elapsed:.1f}s")


def test_03_kendall_oracle():
    start = time.perf_counter()
    rng = np.random.default_rng(11)
    mismatches = 0
    sizes = rng.integers(2, 2001, size=500)
    sizes[0] = 2000
    for s in sizes.tolist():
        levels = int(rng.integers(1, s + 1))
        a = rng.integers(0, levels, s).astype(float)
        b = rng.integers(0, max(2, levels // 2), s).astype(float)
        for variant in ("tau_a", "tau_b"):
            if kendall(a, b, variant) != quadratic_kendall(a, b, variant):
                mismatches += 1
    elapsed = time.perf_counter() - start
    record("3 kendall oracle", mismatches == 0 and elapsed < 60,
           f"{mismatches} mismatches over 500 tied samples (s <= 2000), {elapsed:.1f}s")


MODEL_INDEX = {"er": 0, "nws": 1, "ba_tf": 2}


@pytest.fixture(scope="module")
def runs_1000():
    """Per-seed coefficients at v=1000, five seeds per model, via the harness."""
    spec = ExperimentSpec(models=("er", "nws", "ba_tf"), sizes=(1000,), repetitions=5, seed=1)
    out, timing = {}, {}
    for model in ("er", "nws", "ba_tf"):
        t0 = time.perf_counter()
        results = [run_cell(spec, Cell(model, MODEL_INDEX[model], 1000, 0, rep))
                   for rep in range(5)]
        timing[model] = time.perf_counter() - t0
        assert all(r.coefficients is not None for r in results)
        out[model] = [r.coefficients for r in results]
    return out, timing


def mean_of(runs, measure, coef):
    return float(np.mean([getattr(r[measure], coef) for r in runs]))


def test_04_sign_and_strength(runs_1000):
    runs, timing = runs_1000
    rho = {m: mean_of(runs["ba_tf"], m, "spearman") for m in ("degree", "betweenness", "closeness")}
    ok = rho["degree"] <= -0.6 and rho["betweenness"] <= -0.5 and rho["closeness"] <= -0.3
    record("4 BA-TF sign and strength", ok and timing["ba_tf"] < 120,
           "rho(GoT, degree/betweenness/closeness) = "
           + ", ".join(f"{v:+.3f}" for v in rho.values()) + f"; {timing['ba_tf']:.1f}s")


def test_05_er_near_identity(runs_1000):
    runs, timing = runs_1000
    rho = [mean_of(runs["er"], m, "spearman") for m in ("degree", "betweenness", "closeness")]
    spread = max(rho) - min(rho)
    ok = all(r <= -0.6 for r in rho) and spread <= 0.2
    record("5 ER near-identity", ok and timing["er"] < 120,
           "rho = " + ", ".join(f"{r:+.3f}" for r in rho) + f", spread {spread:.3f}; "
           f"{timing['er']:.1f}s")


def test_06_small_world_clustering(runs_1000):
    runs, timing = runs_1000
    rho = {m: mean_of(runs[m], "clustering", "spearman") for m in ("nws", "ba_tf", "er")}
    ok = rho["nws"] >= 0.3 and -0.3 < rho["ba_tf"] < 0.3 and -0.3 < rho["er"] < 0.3
    record("6 small-world clustering", ok and sum(timing.values()) < 120,
           "rho(GoT, clustering) nws/ba_tf/er = "
           + ", ".join(f"{v:+.3f}" for v in rho.values()))


def test_07_rank_vs_linear(runs_1000):
    runs, _ = runs_1000
    misses = {}
    tau_ok = True
    for model in ("ba_tf", "er"):
        misses[model] = sum(
            abs(r["degree"].spearman) < abs(r["degree"].pearson) for r in runs[model]
        )
        tau_ok &= all(abs(r["degree"].spearman) >= abs(r["degree"].kendall_b)
                      for r in runs[model])
    worst = max(misses.values())
    # one missed seed is a warning; the criterion needs at least 4 of 5 seeds
    ok = tau_ok and worst <= 1
    status = "WARN" if ok and worst == 1 else None
    record("7 rank vs linear", ok,
           f"seeds with |rho| < |r| (GoT-degree): {misses}; |rho| >= |tau_b| in all runs: "
           f"{tau_ok}", status)


DATASETS = [
    ("dolphins.gml", 62, 159, False, False),
    ("hep-th.gml", 8361, 15751, True, False),
    ("as-22july06.gml", 22963, 48436, False, True),
]


def test_08_dataset_fidelity():
    start = time.perf_counter()
    problems, notes = [], []
    for name, n, m, disconnected, optional in DATASETS:
        path = DATA_DIR / name
        if not path.is_file():
            (notes if optional else problems).append(f"{name} missing from {DATA_DIR}")
            continue
        g = load_graph(path)
        got = (g.vertex_count, g.edge_count)
        if got != (n, m):
            problems.append(f"{name}: {got} != {(n, m)}")
        elif disconnected and len(connected_components(g)) < 2:
            problems.append(f"{name}: expected more than one component")
        else:
            notes.append(f"{name} ok")
    elapsed = time.perf_counter() - start
    record("8 dataset fidelity", not problems and elapsed < 30,
           "; ".join(problems + notes) + f"; {elapsed:.1f}s")


def test_09_performance_gap():
    start = time.perf_counter()
    g = gen_ba_tf(15000, 5, 0.3, 2024)
    cfg = GotConfig(seed=1)
    assert cfg.epochs_for(g) == default_epochs(15000) == math.floor(math.log(15000) ** 3)
    run_got(Graph.from_edges(2, [(0, 1)]), GotConfig(epochs=1))  # JIT warm-up
    betweenness_centrality(Graph.from_edges(2, [(0, 1)]))
    g.csr()
    t0 = time.perf_counter()
    run_got(g, cfg)
    t_got = time.perf_counter() - t0
    t0 = time.perf_counter()
    betweenness_centrality(g)
    t_bc = time.perf_counter() - t0
    elapsed = time.perf_counter() - start
    ratio = t_bc / t_got
    record("9 performance gap", ratio >= 10 and t_got < 10 and elapsed < 900,
           f"GoT {t_got:.2f}s ({cfg.epochs_for(g)} epochs, 15000 thieves) vs "
           f"betweenness {t_bc:.2f}s: {ratio:.1f}x; {elapsed:.0f}s total")


def test_10_determinism(tmp_path):
    start = time.perf_counter()
    snaps = []
    for name in ("a", "b"):
        spec = ExperimentSpec(sizes=(1000, 2000), seed=12345, out_dir=tmp_path / name)
        run_experiment(spec)
        root = tmp_path / name
        snaps.append({p.relative_to(root): p.read_bytes() for p in sorted(root.rglob("*.csv"))
                      if p.name != "timings.csv"})
    elapsed = time.perf_counter() - start
    same = snaps[0] == snaps[1]
    record("10 determinism", same and len(snaps[0]) == 32 and elapsed < 300,
           f"{len(snaps[0])} CSV files byte-identical: {same}; {elapsed:.1f}s")
