"""Iterative eigensolver protocol for the two-level agent.

Each iteration prepares |psi> = D|0>, lets the channel act for the
interaction time tau, measures the projector D|1><1|D^dag, and on a
punishment outcome composes a pseudo-random rotation into the action D
while widening or narrowing the exploration interval.  The collapsed state
is not propagated: the next iteration starts again from D|0>.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .dynamics import Channel, TrajectoryCache, evolve
from .qubit import (
    IDENTITY,
    fidelity_to_eigenstates,
    renormalize_unitary,
    rotation_from_angles,
    unitarity_defect,
)

# action drift beyond this triggers a deterministic re-orthonormalization;
# the conjugated-rotation update amplifies unitarity error geometrically,
# so leaving drift uncorrected destroys long episodes
_DRIFT_TOLERANCE = 1e-10


@dataclass(frozen=True)
class QrlParams:
    """Protocol constants: reward/punishment rates, interaction time, length."""

    r: float
    p: float
    tau: float
    k_max: int
    channel: Channel

    def __post_init__(self) -> None:
        if not (0.0 < self.r < 1.0):
            raise ValueError(f"reward rate r must lie in (0, 1), got {self.r}")
        if not (self.p > 1.0 and math.isfinite(self.p)):
            raise ValueError(f"punishment rate p must be > 1, got {self.p}")
        if not (self.tau >= 0.0 and math.isfinite(self.tau)):
            raise ValueError(f"tau must be finite and >= 0, got {self.tau}")
        if not (isinstance(self.k_max, int) and self.k_max >= 1):
            raise ValueError(f"k_max must be an integer >= 1, got {self.k_max}")


@dataclass(frozen=True)
class IterationRecord:
    k: int
    m: int
    w: float
    f: float
    P0: float


@dataclass(frozen=True, eq=False)
class EpisodeTrace:
    """Per-iteration protocol history, stored columnwise."""

    seed: object
    m: np.ndarray
    w: np.ndarray
    f: np.ndarray
    P0: np.ndarray

    @cached_property
    def records(self) -> list:
        return [
            IterationRecord(
                k=i + 1,
                m=int(self.m[i]),
                w=float(self.w[i]),
                f=float(self.f[i]),
                P0=float(self.P0[i]),
            )
            for i in range(len(self.m))
        ]


def measure_and_sample(rho_tau: np.ndarray, action: np.ndarray, rng) -> tuple:
    """Sample the binary outcome of the projector action|1><1|action^dag.

    Returns (m, P0) with P0 the no-punishment probability; the pseudo-random
    threshold is chi <= P0 => m = 0.
    """
    d1 = action[:, 1]
    p1 = float(np.real(np.vdot(d1, rho_tau @ d1)))
    if p1 < -1e-10 or p1 > 1.0 + 1e-10:
        raise FloatingPointError(
            f"projector expectation {p1} outside [0, 1]; invalid state upstream"
        )
    p0 = 1.0 - min(1.0, max(0.0, p1))
    m = 0 if rng.random() <= p0 else 1
    return m, p0


def sample_rotation(w: float, action: np.ndarray, rng) -> np.ndarray:
    """Pseudo-random rotation with angles uniform on [-w*pi, w*pi]."""
    if not (0.0 < w <= 1.0):
        raise ValueError(f"exploration parameter must lie in (0, 1], got {w}")
    alpha_x, alpha_y, alpha_z = rng.uniform(-w * math.pi, w * math.pi, 3)
    return rotation_from_angles(alpha_x, alpha_y, alpha_z, action)


def update_exploration(w: float, m: int, r: float, p: float) -> float:
    """w' = min{1, [(1 - m) r + m p] w}: shrink on reward, widen on punishment.

    The result is floored at the smallest positive normal float: a few
    hundred consecutive rewards would otherwise underflow w to exact zero,
    leaving the (0, 1] range, while at w ~ 1e-308 the sampled rotation is
    already an exact no-op.
    """
    if m not in (0, 1):
        raise ValueError(f"measurement outcome must be 0 or 1, got {m}")
    return min(1.0, max(sys.float_info.min, ((1 - m) * r + m * p) * w))


def update_action(action: np.ndarray, m: int, rotation: np.ndarray) -> np.ndarray:
    """[(1 - m) I + m R] D: keep the action on reward, compose R on punishment."""
    if m not in (0, 1):
        raise ValueError(f"measurement outcome must be 0 or 1, got {m}")
    if m == 0:
        return action
    return rotation @ action


def run_episode(
    params: QrlParams,
    seed,
    cache: Optional[TrajectoryCache] = None,
) -> EpisodeTrace:
    """One full protocol run of k_max iterations.

    All randomness comes from a counter-based generator keyed by ``seed``
    (an int or a tuple of ints), so episodes reproduce bit-for-bit and may
    run concurrently in any order.
    """
    rng = np.random.Generator(np.random.Philox(key=seed))
    action = IDENTITY.copy()
    w = 1.0
    m_out = np.empty(params.k_max, dtype=np.int8)
    w_out = np.empty(params.k_max, dtype=np.float64)
    f_out = np.empty(params.k_max, dtype=np.float64)
    p0_out = np.empty(params.k_max, dtype=np.float64)

    for i in range(params.k_max):
        psi = action[:, 0]  # D|0> is the first column
        f_out[i] = fidelity_to_eigenstates(psi)
        rho_tau = evolve(psi, params.channel, params.tau, cache)
        m, p0 = measure_and_sample(rho_tau, action, rng)
        if m == 1:
            rotation = sample_rotation(w, action, rng)
            action = update_action(action, m, rotation)
            if unitarity_defect(action) > _DRIFT_TOLERANCE:
                action = renormalize_unitary(action)
        w = update_exploration(w, m, params.r, params.p)
        m_out[i] = m
        w_out[i] = w
        p0_out[i] = p0

    return EpisodeTrace(seed=seed, m=m_out, w=w_out, f=f_out, P0=p0_out)
