"""Dense complex-matrix primitives.

Matrices are plain :class:`numpy.ndarray` objects of dtype ``complex128``.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import NotHermitian, ShapeMismatch

HERMITIAN_TOL = 1e-8

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_0, SIGMA_1, SIGMA_2, SIGMA_3)


class HermitianEigenSystem(NamedTuple):
    eigenvalues: np.ndarray  # real, non-increasing
    eigenvectors: np.ndarray  # columns match eigenvalues

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ShapeMismatch(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product with block layout ``a[i, j] * b``."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(factors) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


def dagger(a) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def hermiticity_error(h) -> float:
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise ShapeMismatch(f"matrix is not square: {h.shape}")
    return float(np.max(np.abs(h - h.conj().T), initial=0.0))


def check_hermitian(h, tol: float = HERMITIAN_TOL) -> np.ndarray:
    h = as_matrix(h)
    err = hermiticity_error(h)
    if err > tol:
        raise NotHermitian(f"max |h - h^dagger| = {err:.3e} exceeds {tol:.1e}")
    return h


def herm_eig(h) -> HermitianEigenSystem:
    """Eigendecomposition of a Hermitian matrix, eigenvalues sorted non-increasing.

    Raises NotHermitian when the input departs from Hermiticity by more than 1e-8.
    """
    h = check_hermitian(h)
    # symmetrize away rounding noise before handing to LAPACK (zheevd)
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return HermitianEigenSystem(w[::-1].copy(), v[:, ::-1].copy())


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product Tr(a^dagger b)."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def hs_norm(a) -> float:
    return float(np.linalg.norm(as_matrix(a)))
