"""Acceptance gate: one test per shipped guarantee, one pass/fail line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. Each test states its bound in the printed line; a failure means the
package does not meet that guarantee, not that the test is flaky: every
randomized check is seeded.
"""

import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from mvclust import kernels
from mvclust.baseline import spectral_concat
from mvclust.clusters import assign_clusters
from mvclust.data import load_dataset, make_synthetic, synthetic_arrays
from mvclust.linalg import laplacian, smallest_eigenpairs
from mvclust.metrics import accuracy, nmi, purity
from mvclust.solver import SolverConfig, fit
from mvclust.weights import update_weights
from oracles import (acc_exhaustive, nmi_direct, pg_simplex_qp_batch,
                     purity_direct)

BENCH = dict(n_per_cluster=100, c=3, n_views=3, noise=0.2)  # N = 300


def _bench_config(**overrides):
    base = dict(k_neighbors=10, n_clusters=3, max_iters=50, tol=1e-6, seed=0)
    base.update(overrides)
    return SolverConfig(**base)


def _line(name, ok, detail):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def _qp_value(alpha, g, x):
    return 0.5 * alpha * (x * x).sum(axis=1) + (g * x).sum(axis=1)


def test_criterion_01_row_qp_oracle_equivalence():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    trials, support = 1000, 10
    worst_obj = worst_sol = 0.0

    # per-view row QP: min d.s + lam||s||^2 + w||s - p||^2 on the simplex
    d = rng.uniform(0.0, 3.0, size=(trials, support))
    p = rng.dirichlet(np.ones(support), size=trials)
    lam = rng.uniform(0.1, 2.0, size=trials)
    w_v = rng.uniform(0.0, 2.0, size=trials)
    closed = kernels.project_rows(
        (2.0 * w_v[:, None] * p - d) / (2.0 * (lam + w_v))[:, None])
    alpha = 2.0 * (lam + w_v)
    g = d - 2.0 * w_v[:, None] * p
    oracle = pg_simplex_qp_batch(alpha, g)
    worst_obj = max(worst_obj, np.abs(_qp_value(alpha, g, closed)
                                      - _qp_value(alpha, g, oracle)).max())
    worst_sol = max(worst_sol, np.abs(closed - oracle).max())

    # consensus row QP: min sum_v cv||p - s_v||^2 + beta p.e on the simplex
    m = 3
    s_v = rng.dirichlet(np.ones(support), size=(m, trials))
    cv = rng.uniform(0.05, 1.0, size=(m, trials))
    beta = rng.uniform(0.0, 2.0, size=trials)
    e = rng.uniform(0.0, 4.0, size=(trials, support))
    total = cv.sum(axis=0)
    stacked = (cv[:, :, None] * s_v).sum(axis=0)
    closed = kernels.project_rows(
        (stacked - 0.5 * beta[:, None] * e) / total[:, None])
    alpha = 2.0 * total
    g = -2.0 * stacked + beta[:, None] * e
    oracle = pg_simplex_qp_batch(alpha, g)
    worst_obj = max(worst_obj, np.abs(_qp_value(alpha, g, closed)
                                      - _qp_value(alpha, g, oracle)).max())
    worst_sol = max(worst_sol, np.abs(closed - oracle).max())

    elapsed = time.perf_counter() - start
    ok = worst_obj <= 1e-6 and worst_sol <= 1e-5 and elapsed < 60.0
    _line("criterion 1 row-QP oracle equivalence", ok,
          f"1000+1000 instances, obj gap {worst_obj:.2e} (<=1e-6), "
          f"sol gap {worst_sol:.2e} (<=1e-5), {elapsed:.1f}s (<60s)")


def test_criterion_02_weight_update_beats_sampling():
    rng = np.random.default_rng(102)
    worst = -np.inf
    for r in (1.5, 2.0, 4.0):
        for _ in range(100):
            m = int(rng.integers(2, 7))
            d = rng.uniform(1e-3, 5.0, size=m)
            w = update_weights(d, r).w
            samples = rng.dirichlet(np.ones(m), size=10000)
            best_sampled = ((samples ** r) * d).sum(axis=1).min()
            worst = max(worst, ((w ** r) * d).sum() - best_sampled)
    ok = worst <= 1e-9
    _line("criterion 2 weight closed form", ok,
          f"100 vectors x r in (1.5,2,4) vs 1e4 simplex samples, "
          f"worst excess {worst:.2e} (<=1e-9)")


def test_criterion_03_fixed_beta_objective_monotone():
    violations = 0
    worst = 0.0
    for seed in range(20):
        dataset = synthetic_arrays(50, 3, 3, 0.2, seed)  # N = 150
        config = _bench_config(seed=seed, beta_adaptive=False,
                               beta_init=1.0, max_iters=25, tol=1e-12)
        _, _, _, trace = fit(dataset, config)
        obj = np.array(trace.objective)
        rel = np.diff(obj) / np.maximum(np.abs(obj[:-1]), 1e-12)
        worst = max(worst, float(rel.max(initial=0.0)))
        violations += int((rel > 1e-8).sum())
    ok = violations == 0
    _line("criterion 3 fixed-beta monotonicity", ok,
          f"20 datasets (N=150, M=3, c=3), {violations} violations "
          f"(need 0), worst relative rise {worst:.2e}")


def test_criterion_04_benchmark_converges_within_30_iterations():
    dataset = synthetic_arrays(seed=0, **BENCH)
    config = _bench_config(max_iters=30)
    _, _, _, trace = fit(dataset, config)
    ok = trace.converged and trace.iterations_run <= 30
    _line("criterion 4 convergence speed", ok,
          f"relative change <= 1e-6 at iteration {trace.iterations_run} "
          f"(<=30), converged={trace.converged}")


def test_criterion_05_rank_constraint_realized():
    hits = 0
    for seed in range(20):
        dataset = synthetic_arrays(seed=seed, **BENCH)
        config = _bench_config(seed=seed)
        graph, _, _, trace = fit(dataset, config)
        result = assign_clusters(graph, 3, seed=seed)
        if (result.component_count == 3
                and graph.eigenvalues.sum() <= 1e-6
                and result.method == "components"):
            hits += 1
    ok = hits >= 19  # 95% of 20
    _line("criterion 5 rank constraint", ok,
          f"{hits}/20 seeded runs with exactly c components, "
          f"eig sum <= 1e-6, method=components (need >=19)")


def test_criterion_06_end_to_end_quality_beats_thresholds():
    worst = {"acc": 1.0, "nmi": 1.0, "pur": 1.0, "margin": np.inf}
    for seed in range(10):
        dataset = synthetic_arrays(seed=seed, **BENCH)
        graph, _, _, _ = fit(dataset, _bench_config(seed=seed))
        ours = assign_clusters(graph, 3, seed=seed).labels
        ref = spectral_concat(dataset, 3, 10, seed=seed).labels
        acc = accuracy(dataset.labels, ours)
        worst["acc"] = min(worst["acc"], acc)
        worst["nmi"] = min(worst["nmi"], nmi(dataset.labels, ours))
        worst["pur"] = min(worst["pur"], purity(dataset.labels, ours))
        worst["margin"] = min(worst["margin"],
                              acc - accuracy(dataset.labels, ref))
    ok = (worst["acc"] >= 0.95 and worst["nmi"] >= 0.90
          and worst["pur"] >= 0.95 and worst["margin"] >= -0.02)
    _line("criterion 6 end-to-end quality", ok,
          f"10 seeds, worst acc {worst['acc']:.3f} (>=0.95), "
          f"nmi {worst['nmi']:.3f} (>=0.90), pur {worst['pur']:.3f} "
          f"(>=0.95), margin over baseline {worst['margin']:+.3f} (>=-0.02)")


def test_criterion_06_optional_handwritten_soft_check():
    manifest = os.environ.get("MVCLUST_HANDWRITTEN_MANIFEST")
    if not manifest:
        print("[SKIP] criterion 6 soft check: set MVCLUST_HANDWRITTEN_MANIFEST "
              "to a 2000x10x6 handwritten-digits manifest to run it")
        pytest.skip("optional dataset not provided")
    dataset = load_dataset(manifest)
    graph, _, _, trace = fit(dataset, _bench_config(
        n_clusters=10, max_iters=50))
    labels = assign_clusters(graph, 10, seed=0).labels
    acc = accuracy(dataset.labels, labels)
    in_band = 0.75 <= acc <= 0.95
    # informational only; never gates the suite
    print(f"[INFO] criterion 6 soft check: handwritten acc {acc:.4f} "
          f"({'inside' if in_band else 'outside'} the 0.75-0.95 band)")


def test_criterion_07_metric_oracles():
    rng = np.random.default_rng(107)
    acc_bad = 0
    nmi_worst = pur_worst = 0.0
    for _ in range(200):
        n = int(rng.integers(2, 40))
        t = rng.integers(0, int(rng.integers(1, 7)), size=n)
        p = rng.integers(0, int(rng.integers(1, 7)), size=n)
        if accuracy(t, p) != acc_exhaustive(t, p):
            acc_bad += 1
        nmi_worst = max(nmi_worst, abs(nmi(t, p) - nmi_direct(t, p)))
        pur_worst = max(pur_worst, abs(purity(t, p) - purity_direct(t, p)))
    inv_worst = 0.0
    for _ in range(100):
        n = int(rng.integers(5, 30))
        t = rng.integers(0, 5, size=n)
        p = rng.integers(0, 5, size=n)
        base = np.array([accuracy(t, p), nmi(t, p), purity(t, p)])
        t2 = rng.permutation(5)[t]
        p2 = rng.permutation(5)[p]
        order = rng.permutation(n)
        got = np.array([accuracy(t2[order], p2[order]),
                        nmi(t2[order], p2[order]),
                        purity(t2[order], p2[order])])
        inv_worst = max(inv_worst, np.abs(got - base).max())
    ok = acc_bad == 0 and nmi_worst <= 1e-10 and pur_worst <= 1e-10 \
        and inv_worst <= 1e-10
    _line("criterion 7 metric oracles", ok,
          f"200 pairs: acc mismatches {acc_bad} (need 0), nmi gap "
          f"{nmi_worst:.2e}, pur gap {pur_worst:.2e} (<=1e-10); "
          f"100 relabelings, invariance gap {inv_worst:.2e}")


def test_criterion_08_eigensolver_contract():
    rng = np.random.default_rng(108)
    worst_res = worst_orth = 0.0
    for trial in range(50):
        n = int(rng.integers(5, 201))
        if trial % 2 == 0:
            b = rng.normal(size=(n, n))
            mat = b @ b.T / n
        else:
            s = rng.dirichlet(np.ones(n), size=n)
            mat = laplacian(s)
        c = int(rng.integers(1, min(n, 10) + 1))
        theta, f = smallest_eigenpairs(mat, c)
        res = np.linalg.norm(mat @ f - f * theta, axis=0).max()
        scale = max(1.0, float(np.abs(theta).max()))
        worst_res = max(worst_res, res / scale)
        orth = np.abs(f.T @ f - np.eye(c)).max()
        worst_orth = max(worst_orth, float(orth))
    ok = worst_res <= 1e-8 and worst_orth <= 1e-8
    _line("criterion 8 eigensolver contract", ok,
          f"50 PSD matrices (N<=200), worst scaled residual "
          f"{worst_res:.2e}, worst orthonormality gap {worst_orth:.2e} "
          f"(both <=1e-8)")


def test_criterion_09_cluster_runs_are_byte_identical(tmp_path):
    manifest = make_synthetic(40, 3, 3, 0.2, 7, tmp_path / "data")
    outs = []
    for run, threads in enumerate(("1", "4", "1")):
        out = tmp_path / f"run{run}"
        env = dict(os.environ)
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS"):
            env[var] = threads
        proc = subprocess.run(
            [sys.executable, "-m", "mvclust", "cluster", str(manifest),
             "--seed", "0", "--out", str(out)],
            capture_output=True, text=True, env=env,
            cwd=Path(__file__).resolve().parent.parent)
        assert proc.returncode == 0, proc.stderr
        outs.append(out)
    labels = [(o / "labels.csv").read_bytes() for o in outs]
    consensus = [(o / "consensus.csv").read_bytes() for o in outs]
    ok = (labels[0] == labels[1] == labels[2]
          and consensus[0] == consensus[1] == consensus[2])
    _line("criterion 9 determinism", ok,
          "three cluster runs (thread counts 1, 4, 1) produced "
          f"byte-identical labels.csv: {labels[0] == labels[2]}, "
          f"consensus.csv: {consensus[0] == consensus[2]}")


def _per_iteration_seconds(dataset, reps=3):
    """Wall time of one outer iteration, initialization cancelled out.

    Runs the loop for 2 and for 12 iterations at an unreachable tolerance
    with beta pinned, so the difference is exactly 10 identical iterations.
    """
    best = np.inf
    for _ in range(reps):
        times = {}
        for iters in (2, 12):
            config = _bench_config(max_iters=iters, tol=1e-300,
                                   beta_adaptive=False)
            start = time.perf_counter()
            fit(dataset, config)
            times[iters] = time.perf_counter() - start
        best = min(best, (times[12] - times[2]) / 10.0)
    return best


def test_criterion_10_per_iteration_scaling_and_wall_clock():
    half = synthetic_arrays(167, 3, 3, 0.2, 0)    # N = 501
    full = synthetic_arrays(334, 3, 3, 0.2, 0)    # N = 1002
    t_half = _per_iteration_seconds(half)
    t_full = _per_iteration_seconds(full)
    ratio = t_full / t_half
    start = time.perf_counter()
    _, _, _, trace = fit(full, _bench_config())
    wall = time.perf_counter() - start
    ok = ratio <= 5.0 and wall < 300.0
    _line("criterion 10 complexity sanity", ok,
          f"per-iteration time {t_half * 1e3:.0f}ms (N=501) -> "
          f"{t_full * 1e3:.0f}ms (N=1002), ratio {ratio:.2f} (<=5); "
          f"full N=1002 run {wall:.1f}s (<300s, "
          f"{trace.iterations_run} iterations)")
