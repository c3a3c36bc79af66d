"""Experiment runners for the scaling, Werner and bound studies.

Every runner returns plain row dictionaries; emission lives in :mod:`lretomo.cli`.
Trial seeds are ``base_seed + trial + SEED_STRIDE * k`` where ``k`` is the
qubit number (scaling) or the index of the (q, N) cell (Werner).  The state
is drawn from the trial seed, the measurement record from trial seed + 2**32.
"""
from __future__ import annotations

import ast
import operator
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .lre import lre_estimate
from .measurement_design import (
    builtin_set, cube_set, group_spectrum, gram_spectrum, mse_upper_bound,
    optimal_bound_global, optimal_bound_local_2qubit,
)
from .mle import MleOptions, mle_estimate
from .sampling import simulate_record
from .states import mse, random_mixed_pure, werner

SEED_STRIDE = 1_000_003
RECORD_SEED_OFFSET = 2 ** 32
DEFAULT_COPIES_RULE = "3^9*4^n"
DEFAULT_BOUND_SETS = (
    "cube1", "cube2", "cube3", "cube4",
    "tetra1", "tetra2", "tetra3", "tetra4",
    "mub1", "mub2",
)

SCALING_COLUMNS = ("n", "trial", "alpha", "time_lre", "time_mle", "mse_lre", "mse_plre",
                   "mse_mle", "mle_iterations", "mle_converged", "mle_min_likelihood_step", "seed")
WERNER_COLUMNS = ("q", "N", "trial", "mse_lre", "mse_plre", "seed")
BOUND_COLUMNS = ("set", "n_qubits", "M", "gram_spectrum", "trace_gram_inverse", "bound_coefficient",
                 "global_optimum_coefficient", "local_optimum_coefficient", "flag")


@dataclass
class BenchmarkConfig:
    experiment: str = "werner"
    qubit_range: tuple[int, int] = (2, 4)
    copies_rule: str = DEFAULT_COPIES_RULE
    q_grid: tuple[float, ...] = tuple(np.round(np.linspace(0, 1, 11), 12))
    copies_list: tuple[int, ...] = (36000,)
    trials: int = 10
    base_seed: int = 0
    sets: tuple[str, ...] = DEFAULT_BOUND_SETS
    mle_options: MleOptions = field(default_factory=lambda: MleOptions(max_iterations=500))
    threads: int | None = None
    mask_timings: bool = False
    output_path: str | None = None
    output_format: str = "csv"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if any(not 0 <= q <= 1 for q in self.q_grid):
            raise ValueError("q_grid values must lie in [0, 1]")


def worker_count(config: BenchmarkConfig) -> int:
    if config.threads is not None:
        return max(1, int(config.threads))
    env = os.environ.get("TOMO_THREADS")
    if env:
        n = int(env)
        if n < 1:
            raise ValueError("TOMO_THREADS must be a positive integer")
        return n
    return 1


def _map(fn, items, config):
    items = list(items)
    workers = worker_count(config)
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.FloorDiv: operator.floordiv,
           ast.Pow: operator.pow}


def eval_copies_rule(rule: str, n: int) -> int:
    """Evaluate an arithmetic rule in ``n`` such as ``"3^9*4^n"`` (``^`` is power)."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return node.value
        if isinstance(node, ast.Name) and node.id == "n":
            return n
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        raise ValueError(f"unsupported element in copies rule {rule!r}")

    try:
        tree = ast.parse(rule.replace("^", "**"), mode="eval")
    except SyntaxError:
        raise ValueError(f"cannot parse copies rule {rule!r}") from None
    value = ev(tree)
    if value != int(value) or value <= 0:
        raise ValueError(f"copies rule {rule!r} gives {value} for n={n}")
    return int(value)


def trial_seed(base_seed: int, trial: int, k: int) -> int:
    return base_seed + trial + SEED_STRIDE * k


def _scaling_trial(args):
    n, trial, seed, mset, copies, options, mask = args
    alpha = float(np.random.default_rng([seed, 1]).uniform())
    rho = random_mixed_pure(n, alpha, seed)
    record = simulate_record(rho, mset, copies, seed + RECORD_SEED_OFFSET)
    est = lre_estimate(record, mset, truth=rho)
    ml = mle_estimate(record, mset, options)
    steps = np.diff(ml.likelihood_trace)
    return {
        "n": n,
        "trial": trial,
        "alpha": alpha,
        "time_lre": 0.0 if mask else round(est.elapsed_ns * 1e-9, 9),
        "time_mle": 0.0 if mask else round(ml.elapsed_ns * 1e-9, 9),
        "mse_lre": est.mse_vs_truth,
        "mse_plre": est.mse_plre_vs_truth,
        "mse_mle": mse(ml.rho, rho),
        "mle_iterations": ml.iterations,
        "mle_converged": int(ml.converged),
        "mle_min_likelihood_step": float(steps.min()) if steps.size else 0.0,
        "seed": seed,
    }


def run_scaling(config: BenchmarkConfig) -> list[dict]:
    """LRE versus MLE on random pure states mixed with the identity, cube sets, N from the copies rule."""
    lo, hi = config.qubit_range
    rows = []
    for n in range(lo, hi + 1):
        mset = cube_set(n)
        copies = eval_copies_rule(config.copies_rule, n)
        jobs = [(n, t, trial_seed(config.base_seed, t, n), mset, copies, config.mle_options,
                 config.mask_timings) for t in range(config.trials)]
        rows.extend(_map(_scaling_trial, jobs, config))
    rows.sort(key=lambda r: (r["n"], r["trial"]))
    return rows


def summarize_scaling(rows) -> list[dict]:
    out = []
    for n in sorted({r["n"] for r in rows}):
        sel = [r for r in rows if r["n"] == n]
        t_lre = float(np.median([r["time_lre"] for r in sel]))
        t_mle = float(np.median([r["time_mle"] for r in sel]))
        out.append({
            "n": n,
            "trials": len(sel),
            "median_time_lre": t_lre,
            "median_time_mle": t_mle,
            "speedup": t_mle / t_lre if t_lre > 0 else float("nan"),
            "mean_mse_lre": float(np.mean([r["mse_lre"] for r in sel])),
            "mean_mse_plre": float(np.mean([r["mse_plre"] for r in sel])),
            "mean_mse_mle": float(np.mean([r["mse_mle"] for r in sel])),
        })
    return out


def _werner_trial(args):
    q, copies, trial, seed, mset, rho = args
    record = simulate_record(rho, mset, copies, seed + RECORD_SEED_OFFSET)
    est = lre_estimate(record, mset, truth=rho)
    return {"q": q, "N": copies, "trial": trial, "mse_lre": est.mse_vs_truth,
            "mse_plre": est.mse_plre_vs_truth, "seed": seed}


def run_werner(config: BenchmarkConfig) -> list[dict]:
    """MSE of LRE and PLRE for Werner states measured with the two-qubit cube set."""
    mset = cube_set(2)
    jobs = []
    cell = 0
    for q in config.q_grid:
        rho = werner(q)
        for copies in config.copies_list:
            jobs.extend((float(q), int(copies), t, trial_seed(config.base_seed, t, cell), mset, rho)
                        for t in range(config.trials))
            cell += 1
    rows = _map(_werner_trial, jobs, config)
    rows.sort(key=lambda r: (r["q"], r["N"], r["trial"]))
    return rows


def _mean_se(values):
    v = np.asarray(values, dtype=float)
    se = v.std(ddof=1) / np.sqrt(v.size) if v.size > 1 else float("nan")
    return float(v.mean()), float(se)


def summarize_werner(rows) -> list[dict]:
    out = []
    for q, copies in sorted({(r["q"], r["N"]) for r in rows}):
        sel = [r for r in rows if r["q"] == q and r["N"] == copies]
        m_lre, se_lre = _mean_se([r["mse_lre"] for r in sel])
        m_plre, se_plre = _mean_se([r["mse_plre"] for r in sel])
        out.append({"q": q, "N": copies, "trials": len(sel),
                    "mean_mse_lre": m_lre, "se_mse_lre": se_lre,
                    "mean_mse_plre": m_plre, "se_mse_plre": se_plre,
                    "bound": optimal_bound_local_2qubit(copies)})
    return out


def format_spectrum(groups) -> str:
    return ";".join(f"{v:.12g}x{k}" for v, k in groups)


def run_bound_report(config: BenchmarkConfig) -> list[dict]:
    """Gram spectrum and bound coefficient N * mse_upper_bound for each named set."""
    rows = []
    for name in config.sets:
        mset = builtin_set(name)
        coeff = mse_upper_bound(mset, mset.count) * mset.count
        glob = optimal_bound_global(mset.dim, 1)
        local = optimal_bound_local_2qubit(1) if mset.dim == 4 else None
        if abs(coeff - glob) <= 1e-9 * glob:
            flag = "achieves global optimum"
        elif local is not None and abs(coeff - local) <= 1e-9 * local:
            flag = "achieves local optimum"
        else:
            flag = ""
        rows.append({
            "set": name,
            "n_qubits": mset.n_qubits,
            "M": mset.count,
            "gram_spectrum": format_spectrum(group_spectrum(gram_spectrum(mset))),
            "trace_gram_inverse": float(np.trace(mset.gram_inverse)),
            "bound_coefficient": coeff,
            "global_optimum_coefficient": glob,
            "local_optimum_coefficient": local,
            "flag": flag,
        })
    return rows
