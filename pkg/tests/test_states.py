import json

import numpy as np
import pytest

from lretomo.errors import DimensionTooLarge, OutOfRange, ParseError
from lretomo.matrix_core import herm_eig
from lretomo.operator_basis import pauli_basis, state_to_bloch
from lretomo.states import (
    SINGLET, is_density_matrix, load_state, mse, random_mixed_pure, save_state, state_from_dict,
    state_to_dict, werner,
)
from oracles import random_density


def test_werner_endpoints():
    np.testing.assert_allclose(werner(0), np.eye(4) / 4)
    np.testing.assert_allclose(werner(1), np.outer(SINGLET, SINGLET.conj()))
    np.testing.assert_allclose(herm_eig(werner(0.5)).eigenvalues, [0.625, 0.125, 0.125, 0.125], atol=1e-12)


@pytest.mark.parametrize("q", np.linspace(0, 1, 11))
def test_werner_spectrum(q):
    ev = herm_eig(werner(q)).eigenvalues
    expected = [(1 + 3 * q) / 4] + [(1 - q) / 4] * 3
    np.testing.assert_allclose(ev, expected, atol=1e-12)
    assert is_density_matrix(werner(q))


def test_werner_range():
    with pytest.raises(OutOfRange):
        werner(1.5)


def test_random_mixed_pure():
    np.testing.assert_allclose(random_mixed_pure(2, 0, 7), np.eye(4) / 4)
    pure = random_mixed_pure(2, 1, 7)
    assert abs(np.trace(pure @ pure).real - 1) < 1e-10
    ev = herm_eig(random_mixed_pure(3, 0.5, 11)).eigenvalues
    np.testing.assert_allclose(ev, [0.5 + 0.5 / 8] + [0.5 / 8] * 7, atol=1e-12)
    assert np.array_equal(random_mixed_pure(3, 0.3, 5), random_mixed_pure(3, 0.3, 5))
    assert not np.array_equal(random_mixed_pure(3, 0.3, 5), random_mixed_pure(3, 0.3, 6))
    with pytest.raises(OutOfRange):
        random_mixed_pure(2, -0.1, 0)
    with pytest.raises(DimensionTooLarge):
        random_mixed_pure(7, 0.5, 0)


def test_mse_examples():
    ket0 = np.diag([1.0, 0.0])
    ket1 = np.diag([0.0, 1.0])
    assert mse(ket0, ket0) == 0
    assert mse(np.eye(2) / 2, ket0) == pytest.approx(0.5)
    assert mse(ket0, ket1) == pytest.approx(2)


def test_mse_matches_bloch_distance(rng):
    b = pauli_basis(2)
    for _ in range(50):
        a, c = random_density(4, rng), random_density(4, rng)
        diff = state_to_bloch(a, b) - state_to_bloch(c, b)
        assert abs(mse(a, c) - diff @ diff) < 1e-10


def test_json_round_trip(tmp_path):
    rho = werner(0.3)
    path = tmp_path / "w.json"
    save_state(rho, path)
    np.testing.assert_array_equal(load_state(path), rho)
    assert set(state_to_dict(rho)) == {"dim", "re", "im"}


@pytest.mark.parametrize("obj, field", [
    ({"re": [[1]], "im": [[0]]}, "dim"),
    ({"dim": 2, "re": [[1, 0]], "im": [[0, 0], [0, 0]]}, "re"),
    ({"dim": 2, "re": [[1, 0], [0, 0]], "im": "x"}, "im"),
    ({"dim": 2, "re": [[2, 0], [0, 0]], "im": [[0, 0], [0, 0]]}, "re"),
])
def test_json_errors_name_field(obj, field):
    with pytest.raises(ParseError) as exc:
        state_from_dict(obj)
    assert exc.value.field == field


def test_invalid_json_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ParseError):
        load_state(path)
    json.loads(json.dumps(state_to_dict(werner(1))))
