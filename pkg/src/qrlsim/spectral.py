"""Spectral analysis of the Ohmic-family bath coupled to the two-level agent.

Provides the spectral density, its Fourier-transform memory kernel, the
principal-value level shift, the bound-state pole with its residue, the
continuum band density, and the long-time spectral representation of the
decoherence factor x(t).

All frequencies are in units of the agent splitting omega0 and all times in
units of 1/omega0; omega0 = 1 internally unless a spec says otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline


@dataclass(frozen=True)
class NoiseSpec:
    """Bath parameters of J(w) = eta * w * (w/omega_c)**(s-1) * exp(-w/omega_c).

    eta = 0 is accepted as the exact noiseless limit (the dynamics module
    relies on it); all other parameters must be strictly positive.
    """

    eta: float
    omega_c: float
    s: float
    omega0: float = 1.0

    def __post_init__(self) -> None:
        for name in ("eta", "omega_c", "s", "omega0"):
            value = getattr(self, name)
            try:
                ok = math.isfinite(float(value))
            except (TypeError, ValueError):
                ok = False
            if not ok:
                raise ValueError(f"{name} must be a finite number, got {value!r}")
        if self.eta < 0.0:
            raise ValueError(f"eta must be >= 0, got {self.eta}")
        if self.omega_c <= 0.0:
            raise ValueError(f"omega_c must be > 0, got {self.omega_c}")
        if self.s <= 0.0:
            raise ValueError(f"s must be > 0, got {self.s}")
        if self.omega0 <= 0.0:
            raise ValueError(f"omega0 must be > 0, got {self.omega0}")


@dataclass(frozen=True)
class SpectrumResult:
    """Outcome of the bound-state search below the band edge."""

    has_bound_state: bool
    E_b: Optional[float] = None
    Z: Optional[float] = None


def gamma_fn(s: float) -> float:
    """Euler gamma function for real s > 0."""
    if not (math.isfinite(s) and s > 0.0):
        raise ValueError(f"gamma_fn requires finite s > 0, got {s}")
    return math.gamma(s)


def spectral_density(omega, spec: NoiseSpec):
    """J(omega); scalar in, scalar out, arrays pass through elementwise."""
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0.0):
        raise ValueError("spectral_density requires omega >= 0")
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = (
            spec.eta
            * w
            * (w / spec.omega_c) ** (spec.s - 1.0)
            * np.exp(-w / spec.omega_c)
        )
    # w = 0 maps to 0 for every s > 0 (the s < 1 power alone would be inf)
    vals = np.where(w > 0.0, vals, 0.0)
    if np.ndim(omega) == 0:
        return float(vals)
    return vals


def memory_kernel(t, spec: NoiseSpec):
    """Noise correlation function f(t) = int_0^inf J(w) e^{-iwt} dw.

    Uses the closed form eta*omega_c^2*Gamma(s+1)/(1+i*omega_c*t)^(s+1).
    The base 1 + i*omega_c*t never touches the negative real axis for
    t >= 0, so the principal branch of the complex power is unambiguous.
    """
    tt = np.asarray(t, dtype=float)
    if np.any(tt < 0.0):
        raise ValueError("memory_kernel requires t >= 0")
    amplitude = spec.eta * spec.omega_c**2 * gamma_fn(spec.s + 1.0)
    vals = amplitude * (1.0 + 1j * spec.omega_c * tt) ** (-(spec.s + 1.0))
    if np.ndim(t) == 0:
        return complex(vals)
    return vals


def _integrate_semi_infinite(
    fn: Callable[[float], float],
    scale: float,
    lo: float = 0.0,
    features: tuple = (),
) -> float:
    """Integral of fn over (lo, inf) via the map w = lo + scale*u/(1-u).

    Feature frequencies become quadrature breakpoints in u; without them the
    adaptive rule can step straight over structure much narrower than scale
    (near-threshold bound states sit at |E_b| many orders below omega_c).
    """

    def g(u: float) -> float:
        w = lo + scale * u / (1.0 - u)
        return fn(w) * scale / (1.0 - u) ** 2

    pts = sorted(
        {
            (f - lo) / ((f - lo) + scale)
            for f in features
            if math.isfinite(f) and f > lo
        }
    )
    pts = [p for p in pts if 1e-14 < p < 1.0 - 1e-14]
    out = quad(
        g,
        0.0,
        1.0,
        points=pts or None,
        limit=500,
        epsabs=1e-12,
        epsrel=1e-11,
        full_output=1,
    )
    return out[0]


def level_shift(E: float, spec: NoiseSpec) -> float:
    """Delta(E) = P int_0^inf J(w)/(E - w) dw.

    For E <= 0 the integrand is regular and a single mapped quadrature
    suffices.  For E > 0 the principal value is taken by subtraction: over a
    symmetric window around the pole the regularized integrand
    (J(w) - J(E))/(E - w) is smooth, the closed-form log term J(E)*log(a/b)
    vanishes because a = b, and the two tails are ordinary integrals.
    """
    if not math.isfinite(E):
        raise ValueError(f"level_shift requires finite E, got {E}")
    if spec.eta == 0.0:
        return 0.0
    if E <= 0.0:
        return _integrate_semi_infinite(
            lambda w: spectral_density(w, spec) / (E - w),
            scale=spec.omega_c,
            features=(abs(E), spec.omega0),
        )

    half_width = min(E, spec.omega_c)
    j_at_e = spectral_density(E, spec)
    # d/dw of J at the pole, used for the removable point of the core
    slope = j_at_e * (spec.s / E - 1.0 / spec.omega_c)

    def core(w: float) -> float:
        if w == E:
            return -slope
        return (spectral_density(w, spec) - j_at_e) / (E - w)

    core_val = quad(
        core,
        E - half_width,
        E + half_width,
        points=[E],
        limit=500,
        epsabs=1e-12,
        epsrel=1e-11,
        full_output=1,
    )[0]

    lower = 0.0
    if E - half_width > 0.0:
        lower = quad(
            lambda w: spectral_density(w, spec) / (E - w),
            0.0,
            E - half_width,
            limit=500,
            epsabs=1e-12,
            epsrel=1e-11,
            full_output=1,
        )[0]
    upper = _integrate_semi_infinite(
        lambda w: spectral_density(w, spec) / (E - w),
        scale=spec.omega_c,
        lo=E + half_width,
    )
    return core_val + lower + upper


def self_energy_Y(E: float, spec: NoiseSpec) -> float:
    """Y(E) = omega0 - int_0^inf J(w)/(w - E) dw, defined below the band."""
    if not (math.isfinite(E) and E < 0.0):
        raise ValueError(
            f"self_energy_Y is defined for E < 0 only (got {E}); "
            "use band_density inside the band"
        )
    # below the band the integral is regular and equals -Delta(E)
    return spec.omega0 + level_shift(E, spec)


def _band_edge_self_energy(spec: NoiseSpec) -> float:
    """Y at E -> 0^- from the numerically integrated threshold integral.

    The closed form omega0 - eta*omega_c*Gamma(s) is deliberately not used
    here; the quadrature route and the closed form check each other in the
    test suite.
    """
    threshold_integral = _integrate_semi_infinite(
        lambda w: spectral_density(w, spec) / w,
        scale=spec.omega_c,
        features=(spec.omega0,),
    )
    return spec.omega0 - threshold_integral


@lru_cache(maxsize=512)
def solve_bound_state(spec: NoiseSpec) -> SpectrumResult:
    """Locate the isolated pole E_b < 0 of the resolvent and its residue Z.

    A bound state exists iff Y(0^-) < 0.  Y(E) - E is strictly decreasing on
    E < 0, so once the left edge of the bracket is positive plain bisection
    is guaranteed to converge; Newton steps are not worth the loss of that
    guarantee.
    """
    if spec.eta == 0.0:
        return SpectrumResult(has_bound_state=False)
    y_edge = _band_edge_self_energy(spec)
    if y_edge >= 0.0:
        return SpectrumResult(has_bound_state=False)

    def residual(e: float) -> float:
        return self_energy_Y(e, spec) - e

    e_lo = -spec.omega0
    while residual(e_lo) <= 0.0:
        e_lo *= 2.0
        if e_lo < -1e3 * spec.omega0:
            raise RuntimeError(
                "bound-state bracket expansion failed below -1000*omega0 "
                "despite Y(0) < 0; self-energy quadrature is inconsistent"
            )
    e_hi = 0.0  # residual at the band edge is y_edge < 0
    tol = 1e-10 * spec.omega0
    root = 0.5 * (e_lo + e_hi)
    for _ in range(300):
        root = 0.5 * (e_lo + e_hi)
        value = residual(root)
        if abs(value) <= tol:
            break
        if value > 0.0:
            e_lo = root
        else:
            e_hi = root
    else:
        raise RuntimeError("bound-state bisection did not reach tolerance")

    curvature = _integrate_semi_infinite(
        lambda w: spectral_density(w, spec) / (root - w) ** 2,
        scale=spec.omega_c,
        features=(abs(root), spec.omega0),
    )
    residue = 1.0 / (1.0 + curvature)
    return SpectrumResult(has_bound_state=True, E_b=root, Z=residue)


def band_density(E: float, spec: NoiseSpec) -> float:
    """Theta(E) = J(E)/{[E - omega0 - Delta(E)]^2 + [pi J(E)]^2} for E > 0."""
    if not (math.isfinite(E) and E > 0.0):
        raise ValueError(f"band_density requires finite E > 0, got {E}")
    j = spectral_density(E, spec)
    if j == 0.0:
        return 0.0
    detune = E - spec.omega0 - level_shift(E, spec)
    return j / (detune * detune + (math.pi * j) ** 2)


@lru_cache(maxsize=32)
def _band_table(spec: NoiseSpec):
    """Graded (E, Theta) table resolving threshold and resonance structure.

    The level shift is evaluated on a moderate log grid and cubic-splined
    against log E, so the dense table costs only spectral_density calls.  A
    quasi-bound resonance narrower than the base spacing is located from the
    sign change of E - omega0 - Delta(E) and refined out to 1e4 line widths;
    the linear panels of the Filon sum must resolve the Lorentzian core and
    most of its tail or the band integral silently loses its mass.
    """
    w0 = spec.omega0
    wc = spec.omega_c
    e_lo = 1e-9 * min(w0, wc)
    e_max = w0 + 45.0 * wc

    knots = np.geomspace(e_lo, e_max, 320)
    delta_knots = np.array([level_shift(float(e), spec) for e in knots])
    shift_spline = CubicSpline(np.log(knots), delta_knots)

    base = np.geomspace(e_lo, e_max, 2400)
    detune = base - w0 - shift_spline(np.log(base))
    flips = np.nonzero(np.signbit(detune[:-1]) != np.signbit(detune[1:]))[0]

    refined = [base]
    for idx in flips:
        a, b = float(base[idx]), float(base[idx + 1])
        f_a = float(detune[idx])
        for _ in range(90):
            mid = 0.5 * (a + b)
            f_mid = mid - w0 - float(shift_spline(math.log(mid)))
            if (f_mid > 0.0) == (f_a > 0.0):
                a, f_a = mid, f_mid
            else:
                b = mid
        e_star = 0.5 * (a + b)
        width = math.pi * spectral_density(e_star, spec)
        if width <= 0.0:
            continue
        offsets = width * np.geomspace(1e-3, 1e4, 240)
        window = np.concatenate((e_star - offsets[::-1], [e_star], e_star + offsets))
        refined.append(window[(window > e_lo) & (window < e_max)])

    grid = np.unique(np.concatenate(refined))
    j = spectral_density(grid, spec)
    detune = grid - w0 - shift_spline(np.log(grid))
    with np.errstate(divide="ignore", invalid="ignore"):
        theta = j / (detune * detune + (math.pi * j) ** 2)
    theta = np.where(j > 0.0, theta, 0.0)
    return grid, theta


def _filon_linear(grid: np.ndarray, values: np.ndarray, t: float) -> complex:
    """Integral of the linear interpolant of values against e^{-iEt}.

    Exact panel moments keep the sum valid for arbitrarily large t*h; the
    series branch covers |z h| -> 0 where the closed forms cancel.
    """
    h = np.diff(grid)
    a = values[:-1]
    b = np.diff(values) / h
    z = -1j * t
    zh = z * h
    small = np.abs(zh) < 1e-5
    with np.errstate(divide="ignore", invalid="ignore"):
        ezh = np.exp(zh)
        m0 = (ezh - 1.0) / z
        m1 = (h * ezh) / z - (ezh - 1.0) / (z * z)
    m0_series = h * (1.0 + zh / 2.0 + zh**2 / 6.0 + zh**3 / 24.0)
    m1_series = h**2 * (0.5 + zh / 3.0 + zh**2 / 8.0 + zh**3 / 30.0)
    m0 = np.where(small, m0_series, m0)
    m1 = np.where(small, m1_series, m1)
    phase = np.exp(z * grid[:-1])
    return complex(np.sum(phase * (a * m0 + b * m1)))


def asymptotic_x(t: float, spec: NoiseSpec) -> complex:
    """x(t) from its spectral representation Z e^{-i E_b t} + int Theta e^{-iEt} dE.

    At t = 0 this reduces to the sum rule Z + int Theta = 1; at long times the
    band term dephases and only the bound-state pole survives.  Meaningful
    for eta > 0 (at eta = 0 the band carries no weight by construction).
    """
    if not math.isfinite(t):
        raise ValueError(f"asymptotic_x requires finite t, got {t}")
    grid, theta = _band_table(spec)
    value = _filon_linear(grid, theta, float(t))
    pole = solve_bound_state(spec)
    if pole.has_bound_state:
        value += pole.Z * complex(math.cos(pole.E_b * t), -math.sin(pole.E_b * t))
    return complex(value)
