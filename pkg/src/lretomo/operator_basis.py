"""Orthonormal Pauli operator basis and Bloch-vector coordinates.

A state is written rho = I/d + sum_i theta_i Omega_i with Omega_0 = I/sqrt(d)
and the remaining operators traceless.  For n qubits the operators are
normalized Pauli words; the index of the word (l_1, ..., l_n) is the base-4
number l_1 l_2 ... l_n, first qubit most significant.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DimensionTooLarge, NotUnitTrace, ShapeMismatch
from .matrix_core import PAULIS, as_matrix, check_hermitian, kron_all

MAX_QUBITS = 6
TRACE_TOL = 1e-8


@dataclass(frozen=True)
class OperatorBasis:
    """The d**2 orthonormal Hermitian operators, stacked as a (d**2, d, d) array."""

    n_qubits: int
    operators: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits

    def __len__(self):
        return len(self.operators)

    def __getitem__(self, i):
        return self.operators[i]

    def label(self, i: int) -> str:
        """Pauli word of operator ``i``, e.g. ``'XY'``."""
        digits = np.base_repr(i, 4).rjust(self.n_qubits, "0")
        return "".join("IXYZ"[int(c)] for c in digits)

    def index(self, word: str) -> int:
        return int("".join(str("IXYZ".index(c)) for c in word.upper()), 4)


def check_qubits(n_qubits: int) -> int:
    n = int(n_qubits)
    if n < 1:
        raise ValueError(f"n_qubits must be positive, got {n_qubits}")
    if n > MAX_QUBITS:
        raise DimensionTooLarge(f"n_qubits={n} exceeds the cap of {MAX_QUBITS}")
    return n


@lru_cache(maxsize=None)
def pauli_basis(n_qubits: int) -> OperatorBasis:
    """Normalized n-qubit Pauli basis; index 4l+m for two qubits."""
    n = check_qubits(n_qubits)
    scaled = [p / np.sqrt(2) for p in PAULIS]
    ops = np.array([kron_all(word) for word in itertools.product(scaled, repeat=n)])
    ops.setflags(write=False)
    return OperatorBasis(n, ops)


def _check_square(rho, dim):
    if rho.shape != (dim, dim):
        raise ShapeMismatch(f"expected a {dim}x{dim} matrix, got {rho.shape}")


def full_coordinates(rho, basis: OperatorBasis) -> np.ndarray:
    """Real coordinates Tr(rho Omega_i) for all d**2 operators, identity included."""
    rho = as_matrix(rho)
    _check_square(rho, basis.dim)
    # Tr(rho Omega) = sum_jk rho_jk Omega_kj
    return np.einsum("kij,ji->k", basis.operators, rho).real


def state_to_bloch(rho, basis: OperatorBasis) -> np.ndarray:
    """Coordinates theta with theta[i-1] = Tr(rho Omega_i), i = 1..d**2-1."""
    rho = check_hermitian(as_matrix(rho))
    _check_square(rho, basis.dim)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise NotUnitTrace(f"trace is {tr!r}, expected 1")
    return full_coordinates(rho, basis)[1:]


def bloch_to_matrix(theta, basis: OperatorBasis) -> np.ndarray:
    """Hermitian unit-trace matrix I/d + sum theta_i Omega_i (not necessarily positive)."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (len(basis) - 1,):
        raise ShapeMismatch(f"theta must have length {len(basis) - 1}, got {theta.shape}")
    d = basis.dim
    m = np.tensordot(theta, basis.operators[1:], axes=1)
    m[np.diag_indices(d)] += 1.0 / d
    return m
