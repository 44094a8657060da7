import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from qrlsim import dynamics, qubit
from qrlsim.spectral import NoiseSpec

REFERENCE = NoiseSpec(eta=0.1, omega_c=10.0, s=1.0)
BOUND = NoiseSpec(eta=0.1, omega_c=20.0, s=1.0)
FREE = NoiseSpec(eta=0.0, omega_c=10.0, s=1.0)


def random_density(rng):
    raw = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = raw @ raw.conj().T
    return rho / np.trace(rho).real


# --- Channel -------------------------------------------------------------------


def test_channel_tag_spec_consistency():
    dynamics.Channel.noiseless()
    dynamics.Channel.born_markov(REFERENCE)
    dynamics.Channel.exact(REFERENCE)
    with pytest.raises(ValueError):
        dynamics.Channel(dynamics.ChannelKind.NOISELESS, REFERENCE)
    with pytest.raises(ValueError):
        dynamics.Channel(dynamics.ChannelKind.EXACT_NON_MARKOVIAN, None)


# --- Volterra solver --------------------------------------------------------------


def test_volterra_noiseless_is_pure_phase():
    traj = dynamics.solve_volterra(FREE, 50.0, 0.01)
    assert np.max(np.abs(np.abs(traj.values) - 1.0)) < 1e-9
    expected = np.exp(-1j * traj.times)
    assert np.max(np.abs(traj.values - expected)) < 1e-3  # phase error ~ dt^2 * t


def test_volterra_rejects_step_size_violations():
    with pytest.raises(ValueError):
        dynamics.solve_volterra(REFERENCE, 10.0, 0.06)  # over 0.05/omega0
    with pytest.raises(ValueError):
        dynamics.solve_volterra(NoiseSpec(0.1, 100.0, 1.0), 10.0, 0.01)  # over 0.5/omega_c
    with pytest.raises(ValueError):
        dynamics.solve_volterra(REFERENCE, 0.001, 0.01)  # t_max < dt
    with pytest.raises(ValueError):
        dynamics.solve_volterra(REFERENCE, 10.0, -0.01)


def test_volterra_contractive():
    traj = dynamics.solve_volterra(REFERENCE, 100.0, 0.01)
    assert np.max(np.abs(traj.values)) <= 1.0 + 1e-6


def test_volterra_second_order_convergence():
    reference = dynamics.solve_volterra(REFERENCE, 20.0, 0.00125)
    errors = []
    for dt in (0.04, 0.02, 0.01):
        traj = dynamics.solve_volterra(REFERENCE, 20.0, dt)
        stride = round(dt / 0.00125)
        errors.append(np.max(np.abs(traj.values - reference.values[::stride])))
    slopes = [math.log2(errors[i] / errors[i + 1]) for i in range(2)]
    for slope in slopes:
        assert slope == pytest.approx(2.0, abs=0.2)


def test_volterra_halving_stability():
    coarse = dynamics.solve_volterra(REFERENCE, 50.0, 0.01)
    fine = dynamics.solve_volterra(REFERENCE, 50.0, 0.005)
    assert abs(np.max(np.abs(coarse.values)) - np.max(np.abs(fine.values))) < 1e-4


def test_volterra_decays_without_bound_state():
    # omega_c below threshold: |x| decays to zero with no revivals beyond
    # the small oscillations riding on the envelope
    spec = NoiseSpec(eta=0.1, omega_c=5.0, s=1.0)
    traj = dynamics.solve_volterra(spec, 200.0, 0.01)
    magnitude = np.abs(traj.values)
    assert magnitude[-1] < 0.05
    peaks = magnitude[:20000].reshape(10, 2000).max(axis=1)
    assert np.all(np.diff(peaks) < 0.0)


def test_volterra_weak_coupling_tracks_markov_envelope():
    # at eta = 0.01 the Markovian envelope is accurate to a few percent out
    # to t = 5; at eta = 0.1 the true decay rate differs by order one, which
    # is exactly the non-Markovian correction this solver exists to capture
    spec = NoiseSpec(eta=0.01, omega_c=5.0, s=1.0)
    traj = dynamics.solve_volterra(spec, 5.0, 0.01)
    kappa = math.pi * 0.01 * math.exp(-0.2)
    for t_idx in (100, 250, 500):
        envelope = math.exp(-kappa * traj.times[t_idx])
        assert abs(traj.values[t_idx]) == pytest.approx(envelope, rel=0.10)


def test_volterra_plateau_matches_residue():
    traj = dynamics.solve_volterra(BOUND, 100.0, 0.01)
    from qrlsim.spectral import solve_bound_state

    z = solve_bound_state(BOUND).Z
    assert abs(traj.at(100.0)) == pytest.approx(z, rel=0.05)


def test_trajectory_interpolation():
    traj = dynamics.solve_volterra(FREE, 1.0, 0.01)
    assert traj.at(0.0) == 1.0 + 0.0j
    assert traj.at(0.5) == pytest.approx(traj.values[50], abs=1e-12)
    mid = traj.at(0.505)
    assert mid == pytest.approx(0.5 * (traj.values[50] + traj.values[51]), abs=1e-12)
    with pytest.raises(ValueError):
        traj.at(-0.1)
    with pytest.raises(ValueError):
        traj.at(2.0)


# --- Born-Markov closed form -----------------------------------------------------


def test_born_markov_reference_values():
    assert dynamics.born_markov_x(0.0, REFERENCE) == 1.0 + 0.0j
    assert abs(dynamics.born_markov_x(1.0, REFERENCE)) == pytest.approx(
        oracles.EXP_MINUS_KAPPA, rel=1e-12
    )


def test_born_markov_envelope_is_exponential():
    ts = np.linspace(0.0, 20.0, 7)
    mags = np.abs(dynamics.born_markov_x(ts, REFERENCE))
    assert np.allclose(mags, np.exp(-oracles.KAPPA_REFERENCE * ts), rtol=1e-12)


def test_born_markov_rate_constant():
    # -d log x / dt must equal kappa + i(omega0 + Delta) identically
    dt = 1e-4
    for t in (0.5, 3.0, 11.0):
        ratio = dynamics.born_markov_x(t + dt, REFERENCE) / dynamics.born_markov_x(
            t, REFERENCE
        )
        rate = -np.log(ratio) / dt
        assert rate.real == pytest.approx(oracles.KAPPA_REFERENCE, abs=1e-8)


def test_born_markov_rejects_negative_time():
    with pytest.raises(ValueError):
        dynamics.born_markov_x(-1.0, REFERENCE)


# --- rates ------------------------------------------------------------------------


def test_rates_noiseless():
    traj = dynamics.solve_volterra(FREE, 10.0, 0.01)
    gamma, big_omega = dynamics.rates(traj)
    assert np.nanmax(np.abs(gamma)) < 1e-12
    assert np.nanmax(np.abs(big_omega - 1.0)) < 1e-12


def test_rates_decay_to_zero_with_bound_state():
    traj = dynamics.solve_volterra(BOUND, 200.0, 0.0125)
    gamma, _ = dynamics.rates(traj)
    early = np.nanmax(np.abs(gamma[: len(gamma) // 20]))
    late = np.nanmax(np.abs(gamma[-len(gamma) // 20 :]))
    assert late < 0.05 * early
    assert late < 5e-3


def test_rates_flag_near_zeros():
    spec = NoiseSpec(eta=0.1, omega_c=5.0, s=1.0)
    traj = dynamics.solve_volterra(spec, 220.0, 0.01)
    gamma, _ = dynamics.rates(traj)
    if np.any(np.abs(traj.values) <= 1e-12):
        assert np.any(np.isnan(gamma))


# --- amplitude damping channel ------------------------------------------------------


def test_channel_identity_and_full_decay(rng):
    rho = random_density(rng)
    assert np.allclose(dynamics.apply_channel(rho, 1.0 + 0.0j), rho, atol=1e-14)
    ket_minus = qubit.KET_MINUS
    assert np.allclose(
        dynamics.apply_channel(rho, 0.0j),
        np.outer(ket_minus, ket_minus.conj()),
        atol=1e-14,
    )


def test_channel_excited_population_scaling():
    rho_plus = np.outer(qubit.KET_PLUS, qubit.KET_PLUS.conj())
    x = 0.6 - 0.3j
    out = dynamics.apply_channel(rho_plus, x)
    population = np.vdot(qubit.KET_PLUS, out @ qubit.KET_PLUS).real
    assert population == pytest.approx(abs(x) ** 2, rel=1e-12)


def test_channel_rejects_unphysical_factor(rng):
    with pytest.raises(ValueError):
        dynamics.apply_channel(random_density(rng), 1.0 + 1e-6 + 0.0j)


@settings(max_examples=200, deadline=None)
@given(
    data=st.tuples(
        st.floats(0.0, 1.0), st.floats(0.0, 2.0 * math.pi), st.integers(0, 2**31 - 1)
    )
)
def test_channel_trace_and_positivity(data):
    mag, phase, seed = data
    x = mag * complex(math.cos(phase), math.sin(phase))
    rho = random_density(np.random.default_rng(seed))
    out = dynamics.apply_channel(rho, x)
    assert np.trace(out).real == pytest.approx(1.0, abs=1e-13)
    assert abs(np.trace(out).imag) < 1e-13
    assert np.allclose(out, out.conj().T, atol=1e-13)
    assert np.linalg.eigvalsh(out).min() > -1e-10


def test_channel_pure_phase_equals_unitary(rng):
    # x = e^{-i omega0 tau} must reproduce the noiseless evolution exactly
    tau = 1.37
    psi = rng.normal(size=2) + 1j * rng.normal(size=2)
    psi = psi / np.linalg.norm(psi)
    rho = np.outer(psi, psi.conj())
    via_channel = dynamics.apply_channel(rho, np.exp(-1j * tau))
    phi = qubit.hamiltonian_unitary(1.0, tau) @ psi
    via_unitary = np.outer(phi, phi.conj())
    assert np.allclose(via_channel, via_unitary, atol=1e-12)


# --- evolve and the trajectory cache ---------------------------------------------


def test_evolve_noiseless_period():
    rho = dynamics.evolve(qubit.KET_0, dynamics.Channel.noiseless(), 2.0 * math.pi)
    assert np.allclose(rho, np.outer(qubit.KET_0, qubit.KET_0.conj()), atol=1e-12)


def test_evolve_born_markov_population():
    tau = 2.5
    rho = dynamics.evolve(qubit.KET_PLUS, dynamics.Channel.born_markov(REFERENCE), tau)
    population = np.vdot(qubit.KET_PLUS, rho @ qubit.KET_PLUS).real
    assert population == pytest.approx(
        math.exp(-2.0 * oracles.KAPPA_REFERENCE * tau), rel=1e-10
    )


def test_evolve_ground_state_is_dark():
    for channel in (
        dynamics.Channel.born_markov(REFERENCE),
        dynamics.Channel.exact(NoiseSpec(eta=0.1, omega_c=5.0, s=1.0)),
    ):
        rho = dynamics.evolve(qubit.KET_MINUS, channel, 7.0)
        assert np.allclose(
            rho, np.outer(qubit.KET_MINUS, qubit.KET_MINUS.conj()), atol=1e-12
        )


def test_evolve_rejects_bad_tau():
    with pytest.raises(ValueError):
        dynamics.evolve(qubit.KET_0, dynamics.Channel.noiseless(), -1.0)


def test_cache_one_solve_per_key_and_horizon_growth():
    cache = dynamics.TrajectoryCache(t_max=10.0)
    spec = NoiseSpec(eta=0.1, omega_c=5.0, s=1.0)
    first = cache.get(spec, 5.0)
    again = cache.get(spec, 5.0)
    assert first is again
    longer = cache.get(spec, 50.0)
    assert longer.t_max >= 50.0


def test_cache_concurrent_reads_consistent():
    from concurrent.futures import ThreadPoolExecutor

    cache = dynamics.TrajectoryCache(t_max=20.0)
    spec = NoiseSpec(eta=0.1, omega_c=5.0, s=1.0)
    with ThreadPoolExecutor(max_workers=8) as pool:
        trajectories = list(pool.map(lambda _: cache.get(spec, 10.0), range(16)))
    assert all(traj is trajectories[0] for traj in trajectories)


def test_default_time_step_policy():
    assert dynamics.default_time_step(REFERENCE) == pytest.approx(0.01)
    tight = dynamics.default_time_step(NoiseSpec(0.01, 1000.0 / 9.0, 1.0))
    assert tight == pytest.approx(0.25 * 9.0 / 1000.0)
    limit = min(0.05, 0.5 / (1000.0 / 9.0))
    assert tight <= limit
