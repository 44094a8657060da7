import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm

from qrlsim import qubit

ANGLES = st.floats(-4.0 * math.pi, 4.0 * math.pi, allow_nan=False)


def random_state(rng):
    raw = rng.normal(size=2) + 1j * rng.normal(size=2)
    return raw / np.linalg.norm(raw)


def test_basis_states_normalized_and_orthogonal():
    assert np.vdot(qubit.KET_PLUS, qubit.KET_PLUS) == pytest.approx(1.0)
    assert np.vdot(qubit.KET_PLUS, qubit.KET_MINUS) == pytest.approx(0.0)
    assert np.allclose(
        (qubit.KET_0 + qubit.KET_1) * qubit.SQRT_HALF, qubit.KET_PLUS
    )


def test_eigenstates_diagonalize_sigma_x():
    assert np.allclose(qubit.SIGMA_X @ qubit.KET_PLUS, qubit.KET_PLUS)
    assert np.allclose(qubit.SIGMA_X @ qubit.KET_MINUS, -qubit.KET_MINUS)


@given(angle=ANGLES)
def test_pauli_rotation_matches_matrix_exponential(angle):
    for sigma in (qubit.SIGMA_X, qubit.SIGMA_Y, qubit.SIGMA_Z):
        direct = expm(-0.5j * angle * sigma)
        assert np.allclose(qubit.pauli_rotation(sigma, angle), direct, atol=1e-12)


def test_hamiltonian_unitary_is_x_rotation():
    u = qubit.hamiltonian_unitary(1.0, 0.7)
    assert np.allclose(u, qubit.pauli_rotation(qubit.SIGMA_X, 0.7))
    assert qubit.is_unitary(u)


def test_hamiltonian_unitary_period():
    # one full period is -identity, so the orbit of any state closes
    u = qubit.hamiltonian_unitary(1.0, 2.0 * math.pi)
    assert np.allclose(u, -qubit.IDENTITY, atol=1e-12)


def test_hamiltonian_unitary_rejects_bad_arguments():
    with pytest.raises(ValueError):
        qubit.hamiltonian_unitary(1.0, -0.1)
    with pytest.raises(ValueError):
        qubit.hamiltonian_unitary(0.0, 1.0)
    with pytest.raises(ValueError):
        qubit.hamiltonian_unitary(1.0, math.inf)


@given(ax=ANGLES, ay=ANGLES, az=ANGLES)
def test_rotation_from_angles_unitary(ax, ay, az):
    r = qubit.rotation_from_angles(ax, ay, az, qubit.IDENTITY)
    assert qubit.is_unitary(r, tol=1e-10)


def test_rotation_from_angles_identity_at_zero():
    assert np.allclose(
        qubit.rotation_from_angles(0.0, 0.0, 0.0, qubit.IDENTITY), qubit.IDENTITY
    )


def test_rotation_from_angles_frame_conjugation(rng):
    # build a random unitary frame from a rotation, then check R_frame = F R F^dag
    frame = qubit.rotation_from_angles(0.3, -1.2, 0.8, qubit.IDENTITY)
    bare = qubit.rotation_from_angles(0.5, 0.1, -0.9, qubit.IDENTITY)
    framed = qubit.rotation_from_angles(0.5, 0.1, -0.9, frame)
    assert np.allclose(framed, frame @ bare @ frame.conj().T, atol=1e-12)


def test_rotation_from_angles_z_factor_sign():
    # the z factor enters with the opposite exponent sign
    r = qubit.rotation_from_angles(0.0, 0.0, 1.1, qubit.IDENTITY)
    assert np.allclose(r, qubit.pauli_rotation(qubit.SIGMA_Z, -1.1))


def test_rotation_from_angles_rejects_non_finite():
    with pytest.raises(ValueError):
        qubit.rotation_from_angles(math.nan, 0.0, 0.0, qubit.IDENTITY)


def test_fidelity_known_values():
    assert qubit.fidelity_to_eigenstates(qubit.KET_0) == pytest.approx(
        qubit.SQRT_HALF
    )
    assert qubit.fidelity_to_eigenstates(qubit.KET_PLUS) == pytest.approx(1.0)
    assert qubit.fidelity_to_eigenstates(qubit.KET_MINUS) == pytest.approx(1.0)


def test_fidelity_range_on_random_states(rng):
    for _ in range(500):
        f = qubit.fidelity_to_eigenstates(random_state(rng))
        assert qubit.SQRT_HALF - 1e-12 <= f <= 1.0 + 1e-12


def test_fidelity_invariant_under_global_phase(rng):
    psi = random_state(rng)
    rotated = np.exp(1.3j) * psi
    assert qubit.fidelity_to_eigenstates(psi) == pytest.approx(
        qubit.fidelity_to_eigenstates(rotated), abs=1e-14
    )


def test_check_pure_state():
    qubit.check_pure_state(qubit.KET_PLUS)
    with pytest.raises(ValueError):
        qubit.check_pure_state(np.array([1.0, 1.0], dtype=complex))


def test_check_density_matrix_accepts_valid(rng):
    psi = random_state(rng)
    qubit.check_density_matrix(np.outer(psi, psi.conj()))


def test_check_density_matrix_rejections():
    with pytest.raises(ValueError):
        qubit.check_density_matrix(np.array([[0.5, 0.1j], [0.1j, 0.5]]))
    with pytest.raises(ValueError):
        qubit.check_density_matrix(np.diag([0.7, 0.7]).astype(complex))
    with pytest.raises(ValueError):
        qubit.check_density_matrix(np.diag([1.2, -0.2]).astype(complex))


def test_renormalize_unitary_restores_drift(rng):
    base = qubit.rotation_from_angles(0.4, 1.0, -0.3, qubit.IDENTITY)
    perturbed = base + 1e-6 * (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    fixed = qubit.renormalize_unitary(perturbed)
    assert qubit.unitarity_defect(fixed) < 1e-14
    assert np.max(np.abs(fixed - base)) < 1e-5


def test_renormalize_unitary_deterministic(rng):
    perturbed = qubit.IDENTITY + 1e-7 * rng.normal(size=(2, 2))
    assert np.array_equal(
        qubit.renormalize_unitary(perturbed), qubit.renormalize_unitary(perturbed)
    )
