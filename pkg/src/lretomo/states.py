"""Test states (Werner family, random pure states mixed with the identity) and the MSE metric."""
from __future__ import annotations

import json

import numpy as np

from .errors import OutOfRange, ParseError, ShapeMismatch
from .matrix_core import as_matrix, check_hermitian, herm_eig
from .operator_basis import check_qubits

STATE_TOL = 1e-10

SINGLET = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)


def is_density_matrix(rho, tol: float = STATE_TOL) -> bool:
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        return False
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        return False
    if abs(np.trace(rho) - 1) > tol:
        return False
    return herm_eig(rho).eigenvalues[-1] >= -tol


def _check_unit_interval(name, value):
    if not 0.0 <= value <= 1.0:
        raise OutOfRange(f"{name} must lie in [0, 1], got {value}")


def werner(q: float) -> np.ndarray:
    """q |psi-><psi-| + (1 - q) I/4 with |psi-> = (|01> - |10>)/sqrt(2)."""
    _check_unit_interval("q", q)
    return q * np.outer(SINGLET, SINGLET.conj()) + (1 - q) * np.eye(4) / 4


def haar_ket(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_mixed_pure(n_qubits: int, alpha: float, seed: int) -> np.ndarray:
    """alpha |psi><psi| + (1 - alpha) I/d with |psi> Haar-random, drawn from ``seed``."""
    n = check_qubits(n_qubits)
    _check_unit_interval("alpha", alpha)
    d = 2 ** n
    psi = haar_ket(d, np.random.default_rng(seed))
    return alpha * np.outer(psi, psi.conj()) + (1 - alpha) * np.eye(d) / d


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Ginibre-ensemble density matrix; full rank unless ``rank`` is given."""
    k = dim if rank is None else rank
    g = rng.standard_normal((dim, k)) + 1j * rng.standard_normal((dim, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def mse(estimate, truth) -> float:
    """Squared Hilbert-Schmidt distance Tr((estimate - truth)^2)."""
    a, b = as_matrix(estimate), as_matrix(truth)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    diff = a - b
    # for Hermitian diff, Tr(diff^2) = sum |diff_ij|^2
    return float(np.sum(np.abs(diff) ** 2))


def state_to_dict(rho) -> dict:
    rho = as_matrix(rho)
    return {"dim": rho.shape[0], "re": rho.real.tolist(), "im": rho.imag.tolist()}


def state_from_dict(obj, *, check_physical: bool = True) -> np.ndarray:
    if not isinstance(obj, dict):
        raise ParseError("density matrix must be a JSON object")
    for key in ("dim", "re", "im"):
        if key not in obj:
            raise ParseError("missing key", key)
    dim = obj["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise ParseError("dim must be a positive integer", "dim")
    parts = {}
    for key in ("re", "im"):
        try:
            arr = np.asarray(obj[key], dtype=float)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"non-numeric entries: {exc}", key) from None
        if arr.shape != (dim, dim):
            raise ParseError(f"expected {dim}x{dim} array, got shape {arr.shape}", key)
        parts[key] = arr
    rho = parts["re"] + 1j * parts["im"]
    if check_physical:
        check_hermitian(rho)
        if not is_density_matrix(rho, tol=1e-8):
            raise ParseError("matrix is not a density matrix (trace 1, positive semidefinite)", "re")
    return rho


def load_state(path) -> np.ndarray:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    return state_from_dict(obj)


def save_state(rho, path) -> None:
    with open(path, "w") as fh:
        json.dump(state_to_dict(rho), fh)
