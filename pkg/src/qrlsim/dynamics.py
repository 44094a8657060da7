"""Reduced dynamics of the two-level agent under amplitude damping.

The decoherence factor x(t) obeys the Volterra integro-differential equation

    dx/dt + i*omega0*x + int_0^t f(t - t') x(t') dt' = 0,    x(0) = 1,

with f the bath memory kernel.  The channel acting on the agent state is the
exact amplitude-damping map parameterized by x alone, applied in the energy
eigenbasis {|+>, |->}.  A Born-Markov closed form and time-local diagnostic
rates are provided alongside.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .qubit import hamiltonian_unitary
from .spectral import NoiseSpec, level_shift, memory_kernel, spectral_density


class ChannelKind(enum.Enum):
    NOISELESS = "noiseless"
    BORN_MARKOV = "bma"
    EXACT_NON_MARKOVIAN = "exact"


@dataclass(frozen=True)
class Channel:
    """Tagged choice of agent dynamics; the bath spec rides along iff noisy."""

    kind: ChannelKind
    spec: Optional[NoiseSpec] = None

    def __post_init__(self) -> None:
        if self.kind is ChannelKind.NOISELESS:
            if self.spec is not None:
                raise ValueError("noiseless channel takes no NoiseSpec")
        elif self.spec is None:
            raise ValueError(f"{self.kind.value} channel requires a NoiseSpec")

    @property
    def omega0(self) -> float:
        # the noiseless channel always works in internal units, omega0 = 1
        return 1.0 if self.spec is None else self.spec.omega0

    @classmethod
    def noiseless(cls) -> "Channel":
        return cls(ChannelKind.NOISELESS)

    @classmethod
    def born_markov(cls, spec: NoiseSpec) -> "Channel":
        return cls(ChannelKind.BORN_MARKOV, spec)

    @classmethod
    def exact(cls, spec: NoiseSpec) -> "Channel":
        return cls(ChannelKind.EXACT_NON_MARKOVIAN, spec)


@dataclass(frozen=True, eq=False)
class XTrajectory:
    """Samples x(n*dt), n = 0..n_max, together with the generating bath."""

    dt: float
    values: np.ndarray
    spec: NoiseSpec

    @property
    def t_max(self) -> float:
        return (len(self.values) - 1) * self.dt

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.values)) * self.dt

    def at(self, t: float) -> complex:
        """Linear interpolation; dt^2 interpolation error matches the solver."""
        if not (0.0 <= t <= self.t_max * (1.0 + 1e-12)):
            raise ValueError(f"t = {t} outside trajectory range [0, {self.t_max}]")
        position = t / self.dt
        idx = min(int(position), len(self.values) - 2)
        frac = position - idx
        return complex((1.0 - frac) * self.values[idx] + frac * self.values[idx + 1])


def solve_volterra(spec: NoiseSpec, t_max: float, dt: float) -> XTrajectory:
    """Second-order product integration of the memory-kernel equation.

    Trapezoidal convolution weights with the implicit trapezoid corrector
    solved exactly per step; the step stays A-stable, so the eta = 0 limit
    is exactly unimodular instead of drifting by O(dt^4) per step.
    """
    if not (dt > 0.0 and math.isfinite(dt)):
        raise ValueError(f"dt must be finite and > 0, got {dt}")
    if t_max < dt:
        raise ValueError(f"t_max = {t_max} must be at least dt = {dt}")
    dt_limit = min(0.05 / spec.omega0, 0.5 / spec.omega_c)
    if dt > dt_limit * (1.0 + 1e-12):
        raise ValueError(
            f"dt = {dt} exceeds min(0.05/omega0, 0.5/omega_c) = {dt_limit:.3e}; "
            "both the agent and kernel time scales must be resolved"
        )

    n = max(1, math.ceil(t_max / dt - 1e-9))
    t = np.arange(n + 1) * dt
    f = memory_kernel(t, spec)
    if not np.all(np.isfinite(f.real) & np.isfinite(f.imag)):
        raise FloatingPointError("memory kernel produced non-finite samples")

    x = np.empty(n + 1, dtype=np.complex128)
    x[0] = 1.0
    # collect the implicit endpoint terms: dx/dt at t_{k+1} equals
    # -c*x_{k+1} - dt*H_{k+1} with c = i*omega0 + dt*f(0)/2 and H the
    # known part of the trapezoidal convolution
    c = 1j * spec.omega0 + 0.5 * dt * f[0]
    denom = 1.0 + 0.5 * dt * c
    deriv = -1j * spec.omega0  # dx/dt at t = 0, where the memory term vanishes
    for k in range(n):
        if k == 0:
            head = 0.5 * f[1] * x[0]
        else:
            head = np.dot(f[1 : k + 1], x[k:0:-1]) + 0.5 * f[k + 1] * x[0]
        x[k + 1] = (x[k] + 0.5 * dt * (deriv - dt * head)) / denom
        deriv = -c * x[k + 1] - dt * head

    magnitude = np.abs(x)
    if magnitude.max() > 1.0 + 1e-6:
        raise FloatingPointError(
            f"|x| reached {magnitude.max():.8f} > 1 + 1e-6; "
            "the reduced dynamics must stay contractive"
        )
    return XTrajectory(dt=dt, values=x, spec=spec)


@lru_cache(maxsize=512)
def _bma_constants(spec: NoiseSpec) -> tuple:
    """Decay rate kappa = pi*J(omega0) and level shift Delta(omega0)."""
    kappa = math.pi * spectral_density(spec.omega0, spec)
    shift = level_shift(spec.omega0, spec) if spec.eta > 0.0 else 0.0
    return kappa, shift


def born_markov_x(t, spec: NoiseSpec):
    """Markovian closed form x(t) = exp(-[kappa + i(omega0 + Delta)] t).

    Scalar in, scalar out; arrays pass through elementwise.
    """
    tt = np.asarray(t, dtype=float)
    if np.any(tt < 0.0) or not np.all(np.isfinite(tt)):
        raise ValueError(f"born_markov_x requires finite t >= 0, got {t}")
    kappa, shift = _bma_constants(spec)
    vals = np.exp(-(kappa + 1j * (spec.omega0 + shift)) * tt)
    if np.ndim(t) == 0:
        return complex(vals)
    return vals


def rates(traj: XTrajectory) -> tuple:
    """Diagnostic decay rate and frequency, gamma = -Re[x'/x], Omega = -Im[x'/x].

    The derivative is taken from the integral equation itself (never finite
    differences); points where |x| <= 1e-12 are returned as NaN since the
    rate representation breaks down at zeros of x.
    """
    x = traj.values
    n = len(x) - 1
    f = memory_kernel(traj.times, traj.spec)
    conv = np.convolve(f, x)[: n + 1]
    memory = traj.dt * (conv - 0.5 * f[0] * x - 0.5 * f * x[0])
    memory[0] = 0.0
    xdot = -1j * traj.spec.omega0 * x - memory
    with np.errstate(divide="ignore", invalid="ignore"):
        log_deriv = np.where(np.abs(x) > 1e-12, xdot / x, np.nan + 0.0j)
    gamma = -log_deriv.real
    big_omega = -log_deriv.imag
    return gamma, big_omega


def apply_channel(rho: np.ndarray, x: complex) -> np.ndarray:
    """Exact amplitude-damping map in the energy eigenbasis.

    With rho expressed in {|+>, |->}: the ++ population is multiplied by
    |x|^2, coherences by x and its conjugate, and the lost population is
    moved to --, which preserves the trace identically.  rho itself is
    trusted (hot path); only the physicality of x is checked.
    """
    mag_sq = (x * x.conjugate()).real
    if mag_sq > (1.0 + 1e-9) ** 2:
        raise ValueError(f"|x| = {math.sqrt(mag_sq):.12f} > 1 + 1e-9 is unphysical")
    r00, r01 = rho[0, 0], rho[0, 1]
    r10, r11 = rho[1, 0], rho[1, 1]
    pp = 0.5 * (r00 + r01 + r10 + r11)
    pm = 0.5 * (r00 - r01 + r10 - r11)
    mp = 0.5 * (r00 + r01 - r10 - r11)
    mm = 0.5 * (r00 - r01 - r10 + r11)
    pp, pm, mp, mm = (
        mag_sq * pp,
        x * pm,
        x.conjugate() * mp,
        mm + (1.0 - mag_sq) * pp,
    )
    return np.array(
        [
            [0.5 * (pp + pm + mp + mm), 0.5 * (pp - pm + mp - mm)],
            [0.5 * (pp + pm - mp - mm), 0.5 * (pp - pm - mp + mm)],
        ],
        dtype=np.complex128,
    )


def default_time_step(spec: NoiseSpec) -> float:
    """Experiment-run step: tighter in omega_c than the solver precondition.

    0.5/omega_c merely keeps the scheme stable; resolving the kernel peak to
    figure accuracy at large cutoffs needs about twice per 1/omega_c of
    margin again (checked against dt-halving at omega_c > 100).
    """
    return min(0.01 / spec.omega0, 0.25 / spec.omega_c)


class TrajectoryCache:
    """One Volterra solve per (spec, dt), shared read-only across episodes.

    Thread-safe with one-time initialization per key; a request beyond the
    cached horizon re-solves with a longer t_max and replaces the entry.
    """

    def __init__(self, t_max: float = 220.0, dt: Optional[float] = None):
        self.t_max = float(t_max)
        self.dt = dt
        self._lock = threading.Lock()
        self._store: dict = {}

    def get(self, spec: NoiseSpec, t_needed: float = 0.0) -> XTrajectory:
        dt = self.dt if self.dt is not None else default_time_step(spec)
        key = (spec, dt)
        with self._lock:
            traj = self._store.get(key)
            if traj is None or traj.t_max < t_needed:
                horizon = max(self.t_max, 1.1 * t_needed, dt)
                traj = solve_volterra(spec, horizon, dt)
                self._store[key] = traj
        return traj


_SHARED_CACHE = TrajectoryCache()


def evolve(
    psi: np.ndarray,
    channel: Channel,
    tau: float,
    cache: Optional[TrajectoryCache] = None,
) -> np.ndarray:
    """Propagate the pure input state for one interaction window.

    Returns a density matrix in the bare basis: the unitary orbit for the
    noiseless channel, or the amplitude-damping map at the appropriate x
    factor for the noisy ones.
    """
    if not (tau >= 0.0 and math.isfinite(tau)):
        raise ValueError(f"tau must be finite and >= 0, got {tau}")
    if channel.kind is ChannelKind.NOISELESS:
        phi = hamiltonian_unitary(channel.omega0, tau) @ psi
        return np.outer(phi, phi.conjugate())
    rho = np.outer(psi, psi.conjugate())
    if channel.kind is ChannelKind.BORN_MARKOV:
        x = born_markov_x(tau, channel.spec)
    else:
        store = cache if cache is not None else _SHARED_CACHE
        x = store.get(channel.spec, tau).at(tau)
    return apply_channel(rho, x)
