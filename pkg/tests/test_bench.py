import numpy as np
import pytest

from lretomo import bench
from lretomo.bench import BenchmarkConfig, eval_copies_rule


def test_copies_rule():
    assert eval_copies_rule("3^9*4^n", 2) == 3 ** 9 * 16
    assert eval_copies_rule("36*1000", 5) == 36000
    for bad in ("__import__('os')", "n/7", "3^"):
        with pytest.raises(ValueError):
            eval_copies_rule(bad, 2)


def test_config_validation():
    with pytest.raises(ValueError):
        BenchmarkConfig(trials=0)
    with pytest.raises(ValueError):
        BenchmarkConfig(q_grid=(0.5, 1.5))


def test_scaling_rows():
    cfg = BenchmarkConfig(experiment="scaling", qubit_range=(2, 3), trials=10)
    rows = bench.run_scaling(cfg)
    assert len(rows) == 20
    assert [(r["n"], r["trial"]) for r in rows] == [(n, t) for n in (2, 3) for t in range(10)]
    for r in rows:
        assert set(r) == set(bench.SCALING_COLUMNS)
        for key in ("mse_lre", "mse_plre", "mse_mle"):
            assert 0 <= r[key] <= 2
        assert r["mse_lre"] <= r["mse_plre"] + 1e-15
        assert r["mle_min_likelihood_step"] >= -1e-9
        assert r["seed"] == r["trial"] + bench.SEED_STRIDE * r["n"]


def test_scaling_deterministic():
    cfg = BenchmarkConfig(experiment="scaling", qubit_range=(2, 2), trials=3, mask_timings=True, base_seed=9)
    assert bench.run_scaling(cfg) == bench.run_scaling(cfg)


def test_threads_do_not_change_results(monkeypatch):
    cfg = BenchmarkConfig(q_grid=(0.0, 1.0), trials=8)
    serial = bench.run_werner(cfg)
    monkeypatch.setenv("TOMO_THREADS", "3")
    assert bench.worker_count(cfg) == 3
    assert bench.run_werner(cfg) == serial


def test_werner_summary_recomputable():
    cfg = BenchmarkConfig(q_grid=(0.0, 0.5), copies_list=(3600, 36000), trials=20)
    rows = bench.run_werner(cfg)
    assert len(rows) == 2 * 2 * 20
    summary = bench.summarize_werner(rows)
    assert len(summary) == 4
    for srow in summary:
        sel = [r["mse_plre"] for r in rows if r["q"] == srow["q"] and r["N"] == srow["N"]]
        assert abs(srow["mean_mse_plre"] - np.mean(sel)) < 1e-12
        assert abs(srow["se_mse_plre"] - np.std(sel, ddof=1) / np.sqrt(len(sel))) < 1e-12
        assert srow["bound"] == pytest.approx(99 / srow["N"])


def test_werner_maximally_mixed_bound_dominates():
    cfg = BenchmarkConfig(q_grid=(0.0,), trials=200)
    mean = bench.summarize_werner(bench.run_werner(cfg))[0]["mean_mse_plre"]
    # each base has variance 0.1875/(N/M) against the enlarged 0.25/(N/M)
    assert mean < 99 / 36000


def test_bound_report():
    rows = {r["set"]: r for r in bench.run_bound_report(BenchmarkConfig())}
    assert rows["mub2"]["bound_coefficient"] == pytest.approx(75, abs=1e-9)
    assert rows["mub2"]["flag"] == "achieves global optimum"
    assert rows["cube2"]["bound_coefficient"] == pytest.approx(99, abs=1e-9)
    assert rows["cube2"]["flag"] == "achieves local optimum"
    assert rows["tetra2"]["flag"] == "achieves local optimum"
    assert rows["cube1"]["bound_coefficient"] == pytest.approx(4.5, abs=1e-12)
    assert rows["cube2"]["gram_spectrum"] == "3x6;1x9"
    assert rows["cube4"]["M"] == 1296


@pytest.mark.slow
def test_scaling_speed_gap_n4():
    cfg = BenchmarkConfig(experiment="scaling", qubit_range=(4, 4), trials=3)
    summary = bench.summarize_scaling(bench.run_scaling(cfg))[0]
    assert summary["median_time_lre"] < summary["median_time_mle"] / 10
