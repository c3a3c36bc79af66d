"""Outcome probabilities and simulated binomial measurement records."""
from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientCopies, ParseError, ShapeMismatch
from .matrix_core import as_matrix
from .measurement_design import MeasurementSet
from .operator_basis import full_coordinates

AFFINE_TOL = 1e-10


@dataclass(frozen=True)
class MeasurementRecord:
    """Empirical frequencies p_hat for each base, with N/M trials per base."""

    set_label: str
    trials_per_base: float
    frequencies: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=float)
        if f.ndim != 1:
            raise ShapeMismatch("frequencies must be a vector")
        if np.any(f < 0) or np.any(f > 1):
            raise ValueError("frequencies must lie in [0, 1]")
        if not self.trials_per_base > 0:
            raise ValueError("trials_per_base must be positive")
        f.setflags(write=False)
        object.__setattr__(self, "frequencies", f)

    @property
    def count(self) -> int:
        return self.frequencies.size

    @property
    def total_copies(self) -> float:
        return self.trials_per_base * self.count

    def to_dict(self) -> dict:
        tpb = self.trials_per_base
        return {
            "set_label": self.set_label,
            "trials_per_base": int(tpb) if float(tpb).is_integer() else tpb,
            "frequencies": self.frequencies.tolist(),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, obj) -> "MeasurementRecord":
        if not isinstance(obj, dict):
            raise ParseError("measurement record must be a JSON object")
        for key in ("set_label", "trials_per_base", "frequencies"):
            if key not in obj:
                raise ParseError("missing key", key)
        try:
            tpb = float(obj["trials_per_base"])
        except (TypeError, ValueError):
            raise ParseError("must be a number", "trials_per_base") from None
        try:
            freqs = np.asarray(obj["frequencies"], dtype=float)
        except (TypeError, ValueError):
            raise ParseError("must be a list of numbers", "frequencies") from None
        seed = obj.get("seed")
        try:
            return cls(str(obj["set_label"]), tpb, freqs, None if seed is None else int(seed))
        except (ValueError, ShapeMismatch) as exc:
            raise ParseError(str(exc), "frequencies" if "frequenc" in str(exc) else "trials_per_base") from None


def save_record(record: MeasurementRecord, path) -> None:
    with open(path, "w") as fh:
        json.dump(record.to_dict(), fh)


def load_record(path) -> MeasurementRecord:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    return MeasurementRecord.from_dict(obj)


def load_record_csv(path, set_label: str, trials_per_base: float) -> MeasurementRecord:
    """Read externally measured frequencies, one per line."""
    freqs = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or not row[0].strip() or row[0].lstrip().startswith("#"):
                continue
            try:
                freqs.append(float(row[0]))
            except ValueError:
                raise ParseError(f"{path}:{lineno}: not a number: {row[0]!r}", "frequencies") from None
    return MeasurementRecord(set_label, trials_per_base, np.array(freqs))


def true_probabilities(rho, mset: MeasurementSet, *, return_flags: bool = False):
    """Born probabilities p_n = <psi_n| rho |psi_n> = 1/d + theta . Psi_n.

    Both forms are evaluated and must agree.  With ``return_flags`` also
    returns a boolean mask of bases with p_n = 1, i.e. bases whose projector
    already is the state.
    """
    rho = as_matrix(rho)
    d = mset.dim
    if rho.shape != (d, d):
        raise ShapeMismatch(f"state is {rho.shape}, measurement set acts on dimension {d}")
    k = mset.kets
    trace_form = np.einsum("mi,ij,mj->m", k.conj(), rho, k, optimize=True).real
    theta = full_coordinates(rho, mset.basis)[1:]
    affine_form = 1.0 / d + mset.design_matrix @ theta
    gap = np.max(np.abs(trace_form - affine_form))
    if gap > AFFINE_TOL * max(1.0, abs(np.trace(rho))):
        raise ArithmeticError(f"trace and affine probabilities disagree by {gap:.2e}")
    p = np.clip(trace_form, 0.0, 1.0)
    if return_flags:
        return p, np.isclose(p, 1.0, rtol=0, atol=1e-12)
    return p


def trials_per_base(total_copies: int, count: int) -> int:
    if total_copies < count:
        raise InsufficientCopies(f"N={total_copies} copies cannot cover M={count} bases")
    if total_copies % count:
        warnings.warn(f"N={total_copies} is not divisible by M={count}; "
                      f"using floor(N/M)={total_copies // count} trials per base", stacklevel=3)
    return total_copies // count


def simulate_record(rho, mset: MeasurementSet, total_copies: int, seed: int) -> MeasurementRecord:
    """Draw p_hat_n = Binomial(N/M, p_n) / (N/M) for every base."""
    n_trials = trials_per_base(total_copies, mset.count)
    p = true_probabilities(rho, mset)
    rng = np.random.default_rng(seed)
    counts = rng.binomial(n_trials, p)
    return MeasurementRecord(mset.label, n_trials, counts / n_trials, seed)


def exact_record(rho, mset: MeasurementSet, trials: float = 1.0) -> MeasurementRecord:
    """Noiseless record carrying the exact probabilities."""
    return MeasurementRecord(mset.label, trials, true_probabilities(rho, mset), None)
