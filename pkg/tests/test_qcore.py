import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zxforge.errors import BadProbabilities, DimensionMismatch, NonNormalized
from zxforge.qcore import (HADAMARD, KET0, KET1, KET_MINUS, KET_PLUS, PAULI_X, PAULI_Y, PAULI_Z,
                           DensityOperator, StateVector, bloch_to_state, density_from_ensemble,
                           density_from_pure, eq_tol, is_hermitian, is_unitary, kron, n_qubits_for,
                           purity_check)

angles = st.floats(min_value=-10, max_value=10, allow_nan=False)


def test_gate_constants_are_unitary_and_hermitian():
    for g in (PAULI_X, PAULI_Y, PAULI_Z, HADAMARD):
        assert is_unitary(g)
        assert is_hermitian(g)
    np.testing.assert_allclose(HADAMARD @ PAULI_Z @ HADAMARD, PAULI_X, atol=1e-15)


def test_hadamard_basis_images():
    np.testing.assert_allclose(HADAMARD @ KET0, KET_PLUS, atol=1e-12)
    np.testing.assert_allclose(HADAMARD @ KET1, KET_MINUS, atol=1e-12)


def test_basis_and_tensor():
    s = StateVector.basis("10")
    assert s.n_qubits == 2
    np.testing.assert_array_equal(s.amplitudes, [0, 0, 1, 0])
    t = StateVector.basis("1").tensor(StateVector.basis("0"))
    np.testing.assert_array_equal(t.amplitudes, s.amplitudes)
    assert s.normalized


def test_amplitude_count_must_match():
    with pytest.raises(DimensionMismatch):
        StateVector(2, [1, 0])
    with pytest.raises(DimensionMismatch):
        n_qubits_for(3)


def test_state_is_immutable():
    s = StateVector.basis("0")
    with pytest.raises(ValueError):
        s.amplitudes[0] = 5


@given(angles, angles)
def test_bloch_states_are_normalized(theta, phi):
    s = bloch_to_state(theta, phi)
    assert abs(s.norm - 1) < 1e-12
    rho = density_from_pure(s)
    assert purity_check(rho)


def test_bloch_poles():
    np.testing.assert_allclose(bloch_to_state(0, 0).amplitudes, KET0, atol=1e-15)
    np.testing.assert_allclose(bloch_to_state(np.pi, 0).amplitudes, KET1, atol=1e-15)
    np.testing.assert_allclose(bloch_to_state(np.pi / 2, 0).amplitudes, KET_PLUS, atol=1e-15)


def test_pure_density_needs_unit_norm():
    with pytest.raises(NonNormalized):
        density_from_pure(StateVector(1, [1, 1]))


def test_maximally_mixed_ensemble():
    rho = density_from_ensemble([StateVector(1, KET0), StateVector(1, KET1)], [0.5, 0.5])
    np.testing.assert_allclose(rho.matrix, np.eye(2) / 2)
    assert not rho.is_pure
    same = density_from_ensemble([StateVector(1, KET_PLUS), StateVector(1, KET_MINUS)], [0.5, 0.5])
    np.testing.assert_allclose(same.matrix, rho.matrix, atol=1e-15)


def test_ensemble_errors():
    with pytest.raises(BadProbabilities):
        density_from_ensemble([StateVector(1, KET0)], [0.7])
    with pytest.raises(BadProbabilities):
        density_from_ensemble([StateVector(1, KET0), StateVector(1, KET1)], [1.5, -0.5])
    with pytest.raises(DimensionMismatch):
        density_from_ensemble([StateVector(1, KET0)], [0.5, 0.5])
    with pytest.raises(DimensionMismatch):
        density_from_ensemble([StateVector(1, KET0), StateVector.basis("00")], [0.5, 0.5])


def test_density_validation():
    with pytest.raises(ValueError):
        DensityOperator.from_matrix([[1, 1], [0, 0]])
    with pytest.raises(ValueError):
        DensityOperator.from_matrix(np.eye(2))
    with pytest.raises(ValueError):
        DensityOperator.from_matrix([[1.5, 0], [0, -0.5]])


@settings(max_examples=50)
@given(st.lists(st.floats(min_value=0.01, max_value=1), min_size=2, max_size=4),
       st.integers(min_value=0, max_value=2**31))
def test_ensembles_are_valid_states(weights, seed):
    rng = np.random.default_rng(seed)
    probs = np.array(weights) / sum(weights)
    states = []
    for _ in probs:
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        states.append(StateVector(2, v / np.linalg.norm(v)))
    rho = density_from_ensemble(states, probs)
    assert abs(np.trace(rho.matrix) - 1) < 1e-12
    assert np.min(np.linalg.eigvalsh(rho.matrix)) > -1e-12


def test_kron_order():
    np.testing.assert_array_equal(kron(KET1, KET0), [0, 0, 1, 0])


def test_tolerance_env_override(monkeypatch):
    monkeypatch.setenv("ZXFORGE_TOL", "1e-6")
    assert eq_tol() == 1e-6
    monkeypatch.delenv("ZXFORGE_TOL")
    assert eq_tol() == 1e-9
