"""Quantum state tomography by linear regression estimation."""
from .errors import (
    DimensionTooLarge, InsufficientCopies, NotHermitian, NotUnitTrace, OutOfRange, ParseError,
    ShapeMismatch, SingularGram, TomographyError, Unsupported,
)
from .lre import EstimateReport, ls_estimate, lre_estimate, plre, project_physical, simplex_project
from .matrix_core import HermitianEigenSystem, herm_eig, hs_inner, kron
from .measurement_design import (
    MeasurementSet, builtin_set, cube_set, mse_upper_bound, mub_set, optimal_bound_global,
    optimal_bound_local_2qubit, tetrahedron_set, verify_spectrum,
)
from .mle import MleOptions, MleResult, log_likelihood, mle_estimate
from .operator_basis import OperatorBasis, bloch_to_matrix, pauli_basis, state_to_bloch
from .sampling import MeasurementRecord, simulate_record, true_probabilities
from .states import mse, random_mixed_pure, werner

__version__ = "0.1.0"
