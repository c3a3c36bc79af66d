"""Linear regression estimation (LRE) of a quantum state.

The measured frequencies satisfy p_hat_n - 1/d = Psi_n . theta + e_n, so the
Bloch vector is recovered by ordinary least squares with the precomputed
(X^T X)^-1.  The resulting Hermitian unit-trace matrix mu_hat (the pseudo
estimate, PLRE) is then replaced by the closest density matrix in
Hilbert-Schmidt norm, which shares its eigenvectors and has the Euclidean
simplex projection of its spectrum as eigenvalues.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import NotUnitTrace, ShapeMismatch
from .matrix_core import as_matrix, check_hermitian, herm_eig
from .measurement_design import MeasurementSet
from .operator_basis import OperatorBasis, bloch_to_matrix, pauli_basis
from .sampling import MeasurementRecord
from .states import mse, state_to_dict

TRACE_TOL = 1e-8


def ls_estimate(record: MeasurementRecord, mset: MeasurementSet) -> np.ndarray:
    """Least-squares Bloch vector (X^T X)^-1 sum_n Psi_n (p_hat_n - 1/d)."""
    if record.count != mset.count:
        raise ShapeMismatch(f"record has {record.count} frequencies, set has {mset.count} bases")
    inv = mset.require_invertible()
    y = record.frequencies - 1.0 / mset.dim
    return inv @ (mset.design_matrix.T @ y)


def plre(theta_hat, basis: OperatorBasis) -> np.ndarray:
    """Pseudo estimate I/d + sum theta_i Omega_i; may have negative eigenvalues."""
    return bloch_to_matrix(theta_hat, basis)


def simplex_project(v) -> np.ndarray:
    """Euclidean projection onto {w >= 0, sum w = 1} by sort-and-scan.

    w = max(v - tau, 0) where tau is the water level that makes w sum to one.
    """
    v = np.asarray(v, dtype=float)
    if v.size == 0:
        return v.copy()
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, v.size + 1)
    active = np.nonzero(u - css / k > 0)[0][-1]
    tau = css[active] / (active + 1)
    return np.maximum(v - tau, 0.0)


def _normalized_trace(mu):
    mu = check_hermitian(as_matrix(mu))
    tr = np.trace(mu).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise NotUnitTrace(f"trace is {tr!r}, expected 1 within {TRACE_TOL}")
    return mu / tr


def project_physical(mu_hat, *, return_spectra: bool = False):
    """Closest density matrix to ``mu_hat`` in Hilbert-Schmidt norm, O(d^3)."""
    mu = _normalized_trace(mu_hat)
    eig = herm_eig(mu)
    if eig.eigenvalues[-1] >= 0:
        # already a density matrix: the fixed point, returned without re-synthesis
        rho = np.array(mu_hat, dtype=complex)
        tr = np.trace(rho).real
        if abs(tr - 1.0) > 1e-14:
            rho /= tr
        return (rho, eig.eigenvalues, eig.eigenvalues.copy()) if return_spectra else rho
    lam = simplex_project(eig.eigenvalues)
    v = eig.eigenvectors
    rho = (v * lam) @ v.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    if return_spectra:
        return rho, eig.eigenvalues, lam
    return rho


@dataclass(frozen=True)
class EstimateReport:
    theta_hat: np.ndarray = field(repr=False)
    mu_hat: np.ndarray = field(repr=False)
    rho_hat: np.ndarray = field(repr=False)
    spectrum_before: np.ndarray
    spectrum_after: np.ndarray
    elapsed_ls_ns: int
    elapsed_projection_ns: int
    mse_vs_truth: float | None = None
    mse_plre_vs_truth: float | None = None

    @property
    def elapsed_ns(self) -> int:
        return self.elapsed_ls_ns + self.elapsed_projection_ns

    def to_dict(self) -> dict:
        return {
            "theta_hat": self.theta_hat.tolist(),
            "mu_hat": state_to_dict(self.mu_hat),
            "rho_hat": state_to_dict(self.rho_hat),
            "spectrum_before": self.spectrum_before.tolist(),
            "spectrum_after": self.spectrum_after.tolist(),
            "elapsed_ls_ns": self.elapsed_ls_ns,
            "elapsed_projection_ns": self.elapsed_projection_ns,
            "mse_vs_truth": self.mse_vs_truth,
            "mse_plre_vs_truth": self.mse_plre_vs_truth,
        }


def lre_estimate(record: MeasurementRecord, mset: MeasurementSet,
                 basis: OperatorBasis | None = None, truth=None) -> EstimateReport:
    """Full pipeline: least squares, pseudo estimate, physical projection.

    Timing excludes building the measurement set, whose Gram inverse is
    computed once before any data arrive.
    """
    basis = pauli_basis(mset.n_qubits) if basis is None else basis
    if basis.dim != mset.dim:
        raise ShapeMismatch(f"basis dimension {basis.dim} != set dimension {mset.dim}")
    t0 = time.perf_counter_ns()
    theta = ls_estimate(record, mset)
    mu = plre(theta, basis)
    t1 = time.perf_counter_ns()
    rho, before, after = project_physical(mu, return_spectra=True)
    t2 = time.perf_counter_ns()
    err = err_plre = None
    if truth is not None:
        err, err_plre = mse(rho, truth), mse(mu, truth)
    return EstimateReport(theta, mu, rho, before, after, t1 - t0, t2 - t1, err, err_plre)
