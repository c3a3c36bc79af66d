"""Measurement sets, their design/Gram matrices and analytic MSE bounds.

Each measurement base is a rank-1 projector |psi><psi| tested on N/M copies
(a yes/no experiment).  Its feature vector holds the traceless coordinates
Tr(|psi><psi| Omega_i) in the Pauli basis; stacking them row-wise gives the
design matrix X.  The asymptotic worst-case MSE of least squares is
(M / 4N) Tr((X^T X)^-1).
"""
from __future__ import annotations

import hashlib
import itertools
import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, ShapeMismatch, SingularGram, Unsupported
from .matrix_core import PAULIS, kron_all
from .operator_basis import OperatorBasis, check_qubits, pauli_basis

SINGULAR_RTOL = 1e-10
SPECTRUM_TOL = 1e-9

_S = 1 / np.sqrt(2)
CUBE_KETS = {
    "+x": np.array([_S, _S], dtype=complex),
    "-x": np.array([_S, -_S], dtype=complex),
    "+y": np.array([_S, 1j * _S]),
    "-y": np.array([_S, -1j * _S]),
    "+z": np.array([1, 0], dtype=complex),
    "-z": np.array([0, 1], dtype=complex),
}

TETRAHEDRON_DIRECTIONS = np.array([
    [1, 1, 1],
    [1, -1, -1],
    [-1, 1, -1],
    [-1, -1, 1],
]) / np.sqrt(3)


def bloch_ket(r) -> np.ndarray:
    """Qubit ket whose Bloch vector is the unit vector ``r``."""
    x, y, z = r
    theta = np.arccos(np.clip(z, -1.0, 1.0))
    phi = np.arctan2(y, x)
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def qubit_features(ket) -> np.ndarray:
    """All four coordinates <ket| sigma_l / sqrt(2) |ket>, identity first."""
    return np.array([np.vdot(ket, p @ ket).real for p in PAULIS]) / np.sqrt(2)


@dataclass(frozen=True)
class MeasurementSet:
    """M rank-1 projectors with cached design matrix, Gram matrix and its inverse.

    Projectors are stored by their kets (shape ``(M, d)``) to keep large
    product sets cheap; :attr:`projectors` materializes the full matrices.
    """

    label: str
    kets: np.ndarray = field(repr=False)
    design_matrix: np.ndarray = field(repr=False)
    gram: np.ndarray = field(repr=False)
    gram_inverse: np.ndarray | None = field(repr=False)

    @property
    def count(self) -> int:
        return self.kets.shape[0]

    @property
    def dim(self) -> int:
        return self.kets.shape[1]

    @property
    def n_qubits(self) -> int:
        return int(np.log2(self.dim))

    @property
    def psi_vectors(self) -> np.ndarray:
        return self.design_matrix

    @property
    def projectors(self) -> np.ndarray:
        return np.einsum("mi,mj->mij", self.kets, self.kets.conj())

    @property
    def basis(self) -> OperatorBasis:
        return pauli_basis(self.n_qubits)

    def require_invertible(self) -> np.ndarray:
        if self.gram_inverse is None:
            raise SingularGram(f"measurement set {self.label!r} is not informationally complete")
        return self.gram_inverse


def _gram_inverse(gram, count):
    w = np.linalg.eigvalsh(gram)
    if w.size and w[0] < SINGULAR_RTOL * count:
        return None
    inv = np.linalg.inv(gram)
    return 0.5 * (inv + inv.T)


def _build(label, kets, design):
    design = np.ascontiguousarray(design, dtype=float)
    gram = design.T @ design
    inv = _gram_inverse(gram, len(kets))
    for arr in (kets, design, gram, inv):
        if arr is not None:
            arr.setflags(write=False)
    return MeasurementSet(label, kets, design, gram, inv)


def feature_vectors(kets, basis: OperatorBasis) -> np.ndarray:
    """Traceless Pauli coordinates <k|Omega_i|k> for each ket (general path)."""
    kets = np.asarray(kets, dtype=complex)
    if kets.shape[1] != basis.dim:
        raise ShapeMismatch(f"kets have dimension {kets.shape[1]}, basis {basis.dim}")
    full = np.einsum("mi,kij,mj->mk", kets.conj(), basis.operators, kets, optimize=True).real
    return full[:, 1:]


def from_kets(label: str, kets) -> MeasurementSet:
    kets = np.array(kets, dtype=complex)
    if kets.ndim != 2:
        raise ShapeMismatch("kets must be an (M, d) array")
    d = kets.shape[1]
    n = int(round(np.log2(d)))
    if 2 ** n != d:
        raise Unsupported(f"dimension {d} is not a power of two")
    kets = kets / np.linalg.norm(kets, axis=1, keepdims=True)
    return _build(label, kets, feature_vectors(kets, pauli_basis(n)))


def product_set(label: str, single_kets, n_qubits: int) -> MeasurementSet:
    """All n-fold tensor products of the given single-qubit kets.

    The feature vector of a product projector is the Kronecker product of the
    single-qubit coordinate vectors, which avoids the O(M d^4) general path.
    """
    n = check_qubits(n_qubits)
    single_kets = [np.asarray(k, dtype=complex) for k in single_kets]
    feats = [qubit_features(k) for k in single_kets]
    words = list(itertools.product(range(len(single_kets)), repeat=n))
    kets = np.array([kron_all(single_kets[i][:, None] for i in w)[:, 0] for w in words])
    design = np.empty((len(words), 4 ** n))
    for row, w in enumerate(words):
        f = np.ones(1)
        for i in w:
            f = np.kron(f, feats[i])
        design[row] = f
    return _build(label, kets, design[:, 1:])


def cube_set(n_qubits: int) -> MeasurementSet:
    """6**n products of the +-x, +-y, +-z eigenstates (in that order per qubit)."""
    return product_set(f"cube{n_qubits}", list(CUBE_KETS.values()), n_qubits)


def tetrahedron_set(n_qubits: int) -> MeasurementSet:
    kets = [bloch_ket(r) for r in TETRAHEDRON_DIRECTIONS]
    return product_set(f"tetra{n_qubits}", kets, n_qubits)


# Five classes of three mutually commuting two-qubit Pauli words; their joint
# eigenbases are mutually unbiased.  The ZZ class yields the computational basis.
MUB_CLASSES_2Q = (
    ("ZI", "IZ"),
    ("XI", "IX"),
    ("YI", "IY"),
    ("XY", "YZ"),
    ("YX", "ZY"),
)


def _pauli_word(word):
    return kron_all(PAULIS["IXYZ".index(c)] for c in word)


def _joint_eigenbasis(a, b):
    # eigenvalue pairs (+-1, +-1) of commuting a, b map to distinct values of a + 2b
    _, v = np.linalg.eigh(a + 2 * b)
    # fix the global phase of each vector so its first nonzero entry is real positive
    for j in range(v.shape[1]):
        k = np.flatnonzero(np.abs(v[:, j]) > 1e-9)[0]
        v[:, j] *= np.abs(v[k, j]) / v[k, j]
    return v.T


def mub_set(n_qubits: int) -> MeasurementSet:
    """Complete set of mutually unbiased bases for one or two qubits (M = 6 or 20)."""
    if n_qubits == 1:
        kets = []
        for p in (PAULIS[1], PAULIS[2], PAULIS[3]):
            _, v = np.linalg.eigh(p)
            kets.extend(v[:, ::-1].T)
        return from_kets("mub1", kets)
    if n_qubits == 2:
        kets = []
        for a, b in MUB_CLASSES_2Q:
            kets.extend(_joint_eigenbasis(_pauli_word(a), _pauli_word(b)))
        return from_kets("mub2", kets)
    raise Unsupported(f"mutually unbiased bases are provided for 1 or 2 qubits, not {n_qubits}")


BUILTIN_SETS = {
    **{f"cube{n}": (cube_set, n) for n in range(1, 7)},
    **{f"tetra{n}": (tetrahedron_set, n) for n in range(1, 7)},
    "mub1": (mub_set, 1),
    "mub2": (mub_set, 2),
}


def builtin_set(name: str) -> MeasurementSet:
    try:
        factory, n = BUILTIN_SETS[name]
    except KeyError:
        raise Unsupported(f"unknown measurement set {name!r}; choose from {sorted(BUILTIN_SETS)}") from None
    return factory(n)


def mse_upper_bound(mset: MeasurementSet, total_copies) -> float:
    """Asymptotic worst-case MSE (M / 4N) Tr((X^T X)^-1) of the least-squares estimate."""
    inv = mset.require_invertible()
    if total_copies <= 0:
        raise ValueError("total_copies must be positive")
    if total_copies % mset.count:
        warnings.warn(f"N={total_copies} is not divisible by M={mset.count}; using N/M as a real number",
                      stacklevel=2)
    return mset.count / (4.0 * total_copies) * float(np.trace(inv))


def optimal_bound_global(d: int, total_copies) -> float:
    """Minimum of the bound over all measurement sets: d(d+1)(d^2-1) / 4N.

    With sum(lambda) = M(d-1)/d fixed, sum(1/lambda) over d^2-1 eigenvalues is
    smallest when they are all equal.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    return d * (d + 1) * (d * d - 1) / (4.0 * total_copies)


def optimal_bound_local_2qubit(total_copies) -> float:
    """Minimum over two-qubit product measurements: 396/M in sum(1/lambda), i.e. 99/N."""
    return 99.0 / total_copies


def local_2qubit_objective_minimum(m: float) -> float:
    """Smallest sum(1/lambda_i) under the three local-measurement eigenvalue constraints.

    Six eigenvalues at M/12 and nine at M/36 give 72/M + 324/M.
    """
    return 6 * 12 / m + 9 * 36 / m


def gram_spectrum(mset: MeasurementSet) -> np.ndarray:
    """Gram eigenvalues, non-increasing."""
    return np.linalg.eigvalsh(mset.gram)[::-1]


def group_spectrum(values, tol: float = 1e-8):
    """Collapse a sorted spectrum into ``[(value, multiplicity), ...]``."""
    groups = []
    for v in values:
        if groups and abs(groups[-1][0] - v) <= tol:
            val, k = groups[-1]
            groups[-1] = (val, k + 1)
        else:
            groups.append((float(v), 1))
    return groups


@dataclass
class SpectrumReport:
    ok: bool
    eigenvalues: np.ndarray
    expected: np.ndarray
    residuals: np.ndarray

    def __bool__(self):
        return self.ok


def verify_spectrum(mset: MeasurementSet, expected, tol: float = SPECTRUM_TOL) -> SpectrumReport:
    """Compare the Gram spectrum with a multiset given as ``{value: multiplicity}`` or pairs."""
    pairs = expected.items() if isinstance(expected, dict) else expected
    want = np.sort(np.concatenate([np.full(int(k), float(v)) for v, k in pairs]))[::-1]
    have = gram_spectrum(mset)
    if want.shape != have.shape:
        return SpectrumReport(False, have, want, np.full(max(len(have), len(want)), np.inf))
    resid = have - want
    return SpectrumReport(bool(np.all(np.abs(resid) <= tol)), have, want, resid)


def set_checksum(design_matrix) -> str:
    rounded = np.round(np.asarray(design_matrix, dtype=float), 9) + 0.0  # +0.0 folds -0.0
    return hashlib.sha256(rounded.tobytes()).hexdigest()


def set_to_dict(mset: MeasurementSet) -> dict:
    proj = mset.projectors
    return {
        "label": mset.label,
        "dim": mset.dim,
        "projectors": [{"re": p.real.tolist(), "im": p.imag.tolist()} for p in proj],
        "checksum": set_checksum(mset.design_matrix),
    }


def set_from_dict(obj) -> MeasurementSet:
    if not isinstance(obj, dict):
        raise ParseError("measurement set must be a JSON object")
    for key in ("label", "dim", "projectors"):
        if key not in obj:
            raise ParseError("missing key", key)
    d = obj["dim"]
    if not isinstance(d, int) or d < 2:
        raise ParseError("dim must be an integer >= 2", "dim")
    kets = []
    for n, p in enumerate(obj["projectors"]):
        where = f"projectors[{n}]"
        try:
            mat = np.asarray(p["re"], dtype=float) + 1j * np.asarray(p["im"], dtype=float)
        except (KeyError, TypeError, ValueError):
            raise ParseError("projector needs numeric 're' and 'im' arrays", where) from None
        if mat.shape != (d, d):
            raise ParseError(f"expected {d}x{d}, got {mat.shape}", where)
        if np.max(np.abs(mat @ mat - mat)) > 1e-8 or abs(np.trace(mat) - 1) > 1e-8:
            raise ParseError("not a rank-1 projector", where)
        w, v = np.linalg.eigh(0.5 * (mat + mat.conj().T))
        kets.append(v[:, -1])
    if not kets:
        raise ParseError("no projectors given", "projectors")
    mset = from_kets(str(obj["label"]), kets)
    stored = obj.get("checksum")
    if stored is not None and stored != set_checksum(mset.design_matrix):
        raise ParseError("design matrix does not match stored checksum", "checksum")
    return mset


def load_set(path) -> MeasurementSet:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    return set_from_dict(obj)


def save_set(mset: MeasurementSet, path) -> None:
    with open(path, "w") as fh:
        json.dump(set_to_dict(mset), fh)
