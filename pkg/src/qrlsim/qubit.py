"""Exact 2x2 operators and states for the two-level agent.

The agent Hamiltonian is (omega0/2)(|+><+| - |-><-|) with |+-> =
(|0> +- |1>)/sqrt(2), which equals (omega0/2) sigma_x in the bare basis.
Every propagator used here is a closed-form Pauli rotation, never a general
matrix exponential.
"""

from __future__ import annotations

import math

import numpy as np

SQRT_HALF = 1.0 / math.sqrt(2.0)

KET_0 = np.array([1.0, 0.0], dtype=np.complex128)
KET_1 = np.array([0.0, 1.0], dtype=np.complex128)
KET_PLUS = np.array([SQRT_HALF, SQRT_HALF], dtype=np.complex128)
KET_MINUS = np.array([SQRT_HALF, -SQRT_HALF], dtype=np.complex128)

IDENTITY = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)

for _arr in (KET_0, KET_1, KET_PLUS, KET_MINUS, IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z):
    _arr.flags.writeable = False


def pauli_rotation(sigma: np.ndarray, angle: float) -> np.ndarray:
    """exp(-i angle sigma / 2) = cos(angle/2) I - i sin(angle/2) sigma."""
    half = 0.5 * angle
    return math.cos(half) * IDENTITY - 1.0j * math.sin(half) * sigma


def hamiltonian_unitary(omega0: float, tau: float) -> np.ndarray:
    """Free propagator exp(-i H tau) of the agent over one interaction time."""
    if not (tau >= 0.0 and math.isfinite(tau)):
        raise ValueError(f"tau must be finite and >= 0, got {tau}")
    if not (omega0 > 0.0 and math.isfinite(omega0)):
        raise ValueError(f"omega0 must be finite and > 0, got {omega0}")
    return pauli_rotation(SIGMA_X, omega0 * tau)


def rotation_from_angles(
    alpha_x: float, alpha_y: float, alpha_z: float, frame: np.ndarray
) -> np.ndarray:
    """Feedback rotation e^{-i a_y s_y'/2} e^{+i a_z s_z'/2} e^{-i a_x s_x'/2}.

    The primed axes are the bare Pauli axes conjugated by the action unitary
    ``frame``; the z factor carries the opposite exponent sign.  ``frame``
    must be unitary (maintained by the caller, not rechecked here).
    """
    if not (math.isfinite(alpha_x) and math.isfinite(alpha_y) and math.isfinite(alpha_z)):
        raise ValueError("rotation angles must be finite")
    bare = (
        pauli_rotation(SIGMA_Y, alpha_y)
        @ pauli_rotation(SIGMA_Z, -alpha_z)
        @ pauli_rotation(SIGMA_X, alpha_x)
    )
    return frame @ bare @ frame.conj().T


def fidelity_to_eigenstates(psi: np.ndarray) -> float:
    """max(|<+|psi>|, |<-|psi>|); lies in [1/sqrt(2), 1] for normalized psi."""
    plus = abs(psi[0] + psi[1]) * SQRT_HALF
    minus = abs(psi[0] - psi[1]) * SQRT_HALF
    return float(max(plus, minus))


def is_unitary(matrix: np.ndarray, tol: float = 1e-10) -> bool:
    return bool(np.max(np.abs(matrix.conj().T @ matrix - IDENTITY)) <= tol)


def unitarity_defect(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(matrix.conj().T @ matrix - IDENTITY)))


def check_pure_state(psi: np.ndarray, tol: float = 1e-12) -> None:
    norm_sq = abs(psi[0]) ** 2 + abs(psi[1]) ** 2
    if abs(norm_sq - 1.0) > 2.0 * tol:
        raise ValueError(f"state norm deviates from 1 by {abs(norm_sq - 1.0):.3e}")


def check_density_matrix(rho: np.ndarray, tol: float = 1e-12) -> None:
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(rho[0, 0].real + rho[1, 1].real - 1.0) > tol:
        raise ValueError("density matrix trace deviates from 1")
    # 2x2 Hermitian eigenvalues in closed form
    mean = 0.5 * (rho[0, 0].real + rho[1, 1].real)
    radius = math.sqrt(
        (0.5 * (rho[0, 0].real - rho[1, 1].real)) ** 2 + abs(rho[0, 1]) ** 2
    )
    if mean - radius < -1e-10:
        raise ValueError(f"density matrix has negative eigenvalue {mean - radius:.3e}")


def renormalize_unitary(matrix: np.ndarray) -> np.ndarray:
    """Deterministic Gram-Schmidt of the columns, used to arrest drift."""
    c0 = matrix[:, 0]
    c0 = c0 / math.sqrt(abs(c0[0]) ** 2 + abs(c0[1]) ** 2)
    c1 = matrix[:, 1]
    c1 = c1 - (c0[0].conjugate() * c1[0] + c0[1].conjugate() * c1[1]) * c0
    c1 = c1 / math.sqrt(abs(c1[0]) ** 2 + abs(c1[1]) ** 2)
    return np.column_stack((c0, c1))
