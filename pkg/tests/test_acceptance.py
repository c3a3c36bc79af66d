"""Exit criteria.  Each test prints one PASS/FAIL line (also collected in the terminal summary)."""
import time

import numpy as np
import pytest

from lretomo import bench
from lretomo.bench import BenchmarkConfig
from lretomo.lre import lre_estimate, ls_estimate, project_physical
from lretomo.measurement_design import (
    cube_set, gram_spectrum, mse_upper_bound, mub_set, tetrahedron_set, verify_spectrum,
)
from lretomo.mle import MleOptions, mle_estimate
from lretomo.operator_basis import state_to_bloch
from lretomo.sampling import exact_record, simulate_record
from lretomo.states import mse, werner
from oracles import project_density_dual, random_density, random_hermitian_unit_trace

N = 36000


def test_c1_exact_bounds(criterion):
    t0 = time.perf_counter()
    got = {
        "mub2": mse_upper_bound(mub_set(2), N) * N,
        "cube2": mse_upper_bound(cube_set(2), N) * N,
        "tetra2": mse_upper_bound(tetrahedron_set(2), N) * N,
    }
    elapsed = time.perf_counter() - t0
    ok = (abs(got["mub2"] - 75) <= 1e-9 and abs(got["cube2"] - 99) <= 1e-9
          and abs(got["tetra2"] - 99) <= 1e-9 and elapsed < 1)
    criterion(1, ok, f"N*bound = {got} in {elapsed:.3f}s")
    assert ok


def test_c2_gram_spectra(criterion):
    t0 = time.perf_counter()
    c2, m2 = cube_set(2), mub_set(2)
    rc = verify_spectrum(c2, [(c2.count / 12, 6), (c2.count / 36, 9)], tol=1e-9)
    rm = verify_spectrum(m2, [(m2.count / 20, 15)], tol=1e-9)
    elapsed = time.perf_counter() - t0
    ok = bool(rc) and bool(rm) and elapsed < 1
    worst = max(np.abs(rc.residuals).max(), np.abs(rm.residuals).max())
    criterion(2, ok, f"max spectrum residual {worst:.1e} in {elapsed:.3f}s")
    assert ok


def test_c3_noiseless_recovery(criterion):
    rng = np.random.default_rng(3)
    t0 = time.perf_counter()
    worst = 0.0
    for n in (1, 2, 3):
        sets = (cube_set(n), tetrahedron_set(n))
        for _ in range(50):
            d = 2 ** n
            rho = random_density(d, rng, rank=int(rng.integers(1, d + 1)))
            for s in sets:
                rep = lre_estimate(exact_record(rho, s), s)
                worst = max(worst, np.sqrt(mse(rep.rho_hat, rho)))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-9 and elapsed < 30
    criterion(3, ok, f"max Hilbert-Schmidt error {worst:.2e} over 300 reconstructions in {elapsed:.1f}s")
    assert ok


def test_c4_projection_oracle(criterion):
    rng = np.random.default_rng(4)
    t0 = time.perf_counter()
    worst = 0.0
    for i in range(200):
        d = (2, 3, 4)[i % 3]
        mu = random_hermitian_unit_trace(d, rng)
        worst = max(worst, np.linalg.norm(project_physical(mu) - project_density_dual(mu)))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-8 and elapsed < 60
    criterion(4, ok, f"max distance to dual oracle {worst:.2e} in {elapsed:.1f}s")
    assert ok


def test_c5_werner_reproduction(criterion):
    t0 = time.perf_counter()
    cfg = BenchmarkConfig(q_grid=tuple(round(0.1 * k, 12) for k in range(11)), copies_list=(N,), trials=500,
                          base_seed=5)
    summary = bench.summarize_werner(bench.run_werner(cfg))
    elapsed = time.perf_counter() - t0
    bound = 99 / N
    lre = np.array([s["mean_mse_lre"] for s in summary])
    plre = np.array([s["mean_mse_plre"] for s in summary])
    se = np.array([s["se_mse_plre"] for s in summary])
    a = bool(np.all(lre <= plre))
    b = bool(np.all((plre >= 0.5 * bound) & (plre <= 1.1 * bound)))
    spread = (plre.max() - plre.min()) / plre.max()
    c = bool(np.all(lre <= 1.1 * bound))
    ok = a and b and spread < 0.15 and c and elapsed < 300
    for s in summary:
        print(f"  q={s['q']:.1f}  N*mse_lre={s['mean_mse_lre'] * N:7.2f} +- {s['se_mse_lre'] * N:.2f}"
              f"  N*mse_plre={s['mean_mse_plre'] * N:7.2f} +- {s['se_mse_plre'] * N:.2f}")
    criterion(5, ok, f"(a) {a} (b) range {plre.min() / bound:.3f}..{plre.max() / bound:.3f} of 99/N, "
                     f"spread {spread:.1%} (c) {c}; max PLRE s.e. {se.max() / bound:.3f} of 99/N; {elapsed:.1f}s")
    assert ok


def test_c6_unbiasedness(criterion):
    t0 = time.perf_counter()
    s = cube_set(2)
    rho = werner(0.5)
    theta = state_to_bloch(rho, s.basis)
    est = np.array([ls_estimate(simulate_record(rho, s, N, seed), s) for seed in range(2000)])
    elapsed = time.perf_counter() - t0
    se = est.std(axis=0, ddof=1) / np.sqrt(len(est))
    z = np.abs(est.mean(axis=0) - theta) / se
    ok = bool(np.all(z <= 4)) and elapsed < 180
    criterion(6, ok, f"max |mean - theta| / s.e. = {z.max():.2f} over 15 components in {elapsed:.1f}s")
    assert ok


@pytest.fixture(scope="module")
def scaling_run():
    t0 = time.perf_counter()
    cfg = BenchmarkConfig(experiment="scaling", qubit_range=(2, 4), trials=5, base_seed=7,
                          mle_options=MleOptions(max_iterations=500))
    rows = bench.run_scaling(cfg)
    return rows, time.perf_counter() - t0


def test_c7_scaling_trend(criterion, scaling_run):
    rows, elapsed = scaling_run
    summary = {s["n"]: s for s in bench.summarize_scaling(rows)}
    s4 = summary[4]
    in_range = all(0 <= r[k] <= 2 for r in rows for k in ("mse_lre", "mse_plre", "mse_mle"))
    ratio = s4["median_time_mle"] / s4["median_time_lre"]
    ok = ratio >= 10 and in_range and len(rows) == 15 and elapsed < 600
    for n, s in summary.items():
        print(f"  n={n}  median LRE {s['median_time_lre'] * 1e3:.3f} ms  median MLE {s['median_time_mle'] * 1e3:.1f} ms")
    criterion(7, ok, f"n=4 MLE/LRE median time ratio {ratio:.0f}x, all MSE in [0, 2]: {in_range}; {elapsed:.1f}s")
    assert ok


def test_c8_mle_monotone(criterion, scaling_run):
    rows, _ = scaling_run
    worst = min(r["mle_min_likelihood_step"] for r in rows)
    ok = worst >= -1e-9
    criterion(8, ok, f"smallest likelihood step over {len(rows)} MLE runs: {worst:.3e}")
    assert ok


def test_c9_lre_mle_agreement(criterion):
    t0 = time.perf_counter()
    s = cube_set(2)
    rho = werner(0.5)
    means = []
    for copies in (3600, 36000, 360000):
        diffs = []
        for seed in range(100):
            rec = simulate_record(rho, s, copies, seed)
            diffs.append(mse(mle_estimate(rec, s).rho, lre_estimate(rec, s).rho_hat))
        means.append(float(np.mean(diffs)))
    elapsed = time.perf_counter() - t0
    ok = means[0] > means[1] > means[2] and elapsed < 300
    criterion(9, ok, "mean ||LRE - MLE||^2 at N=3600, 36000, 360000: "
                     + ", ".join(f"{m:.2e}" for m in means) + f"; {elapsed:.1f}s")
    assert ok
