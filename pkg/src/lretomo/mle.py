"""Iterative maximum-likelihood baseline (R rho R fixed point).

Each base n is a two-outcome experiment {P_n, I - P_n} repeated N/M times, so
the likelihood is binomial per base.  The combined operators sum to M I,
which makes the usual R rho R iteration applicable with

    R(rho) = sum_n f_n / p_n P_n + (1 - f_n) / (1 - p_n) (I - P_n).
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeMismatch
from .measurement_design import MeasurementSet
from .sampling import MeasurementRecord


@dataclass(frozen=True)
class MleOptions:
    max_iterations: int = 2000
    relative_likelihood_tolerance: float = 1e-10
    probability_floor: float = 1e-12

    def __post_init__(self):
        if self.max_iterations <= 0 or self.relative_likelihood_tolerance <= 0 or self.probability_floor <= 0:
            raise ValueError("all MleOptions fields must be positive")


@dataclass(frozen=True)
class MleResult:
    rho: np.ndarray = field(repr=False)
    iterations: int
    likelihood_trace: np.ndarray = field(repr=False)
    converged: bool
    elapsed_ns: int = 0

    @property
    def non_convergence(self) -> bool:
        return not self.converged


def _check(record, mset):
    if record.count != mset.count:
        raise ShapeMismatch(f"record has {record.count} frequencies, set has {mset.count} bases")


def _probabilities(rho, kets):
    return np.einsum("mi,ij,mj->m", kets.conj(), rho, kets, optimize=True).real


def _log_likelihood(f, p, trials, floor):
    p = np.clip(p, floor, 1.0 - floor)
    # 0 log 0 := 0
    hit = np.where(f > 0, f * np.log(p), 0.0)
    miss = np.where(f < 1, (1.0 - f) * np.log1p(-p), 0.0)
    return float(trials * np.sum(hit + miss))


def log_likelihood(record: MeasurementRecord, mset: MeasurementSet, rho,
                   options: MleOptions = MleOptions()) -> float:
    """sum_n (N/M) [f_n log p_n + (1 - f_n) log(1 - p_n)], p_n clipped to the floor."""
    _check(record, mset)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (mset.dim, mset.dim):
        raise ShapeMismatch(f"state is {rho.shape}, set acts on dimension {mset.dim}")
    return _log_likelihood(record.frequencies, _probabilities(rho, mset.kets),
                           record.trials_per_base, options.probability_floor)


def _r_operator(f, p, kets, floor):
    p = np.clip(p, floor, 1.0 - floor)
    a = f / p
    c = (1.0 - f) / (1.0 - p)
    d = kets.shape[1]
    r = (kets.T * (a - c)) @ kets.conj()
    r[np.diag_indices(d)] += c.sum()
    # scaled so that R = I at an interior fixed point
    return r / len(f)


def _step(rho, r, eps):
    g = r if eps is None else np.eye(len(rho)) + eps * r
    new = g @ rho @ g.conj().T
    new = 0.5 * (new + new.conj().T)
    return new / np.trace(new).real


# dilution factors tried when the plain step fails to increase the likelihood
_DILUTIONS = tuple(2.0 ** -k for k in range(0, 21))


def mle_estimate(record: MeasurementRecord, mset: MeasurementSet,
                 options: MleOptions = MleOptions(), callback=None) -> MleResult:
    """Maximum-likelihood state by R rho R iteration from I/d.

    Stops when the relative likelihood gain drops below the tolerance, or
    after ``max_iterations`` (``converged`` is then False).  A step that
    would lower the likelihood is retried with the diluted update
    (I + eps R) rho (I + eps R); if no dilution helps, the iterate is final.
    The likelihood trace is therefore non-decreasing.

    ``callback(iteration, rho, log_likelihood)`` is called after every accepted step.
    """
    _check(record, mset)
    t0 = time.perf_counter_ns()
    f = record.frequencies
    kets = mset.kets
    floor = options.probability_floor
    trials = record.trials_per_base
    d = mset.dim

    rho = np.eye(d, dtype=complex) / d
    p = _probabilities(rho, kets)
    ll = _log_likelihood(f, p, trials, floor)
    trace = [ll]
    converged = False
    iterations = 0
    while iterations < options.max_iterations:
        iterations += 1
        r = _r_operator(f, p, kets, floor)
        for eps in (None,) + _DILUTIONS:
            cand = _step(rho, r, eps)
            p_cand = _probabilities(cand, kets)
            ll_cand = _log_likelihood(f, p_cand, trials, floor)
            if ll_cand >= ll:
                break
        else:
            converged = True
            break
        gain = ll_cand - ll
        rho, p, ll = cand, p_cand, ll_cand
        trace.append(ll)
        if callback is not None:
            callback(iterations, rho, ll)
        if gain <= options.relative_likelihood_tolerance * max(abs(ll), 1e-300):
            converged = True
            break
    return MleResult(rho, iterations, np.array(trace), converged, time.perf_counter_ns() - t0)
