"""Simulation suite for a noise-resilient quantum reinforcement learning eigensolver.

The package is organised bottom-up:

- ``qubit``: exact 2x2 operators and states of the two-level agent.
- ``spectral``: Ohmic-family bath spectra, level shifts, and the bound-state
  analysis of the dressed agent-environment system.
- ``dynamics``: the exact decoherence factor x(t) from a Volterra
  integro-differential equation, its Born-Markov counterpart, and the
  amplitude-damping channel they drive.
- ``protocol``: the measurement-feedback learning loop of a single episode.
- ``experiments``: seeded Monte Carlo aggregation and parameter sweeps.
- ``cli``: configuration files, CSV/manifest output, command dispatch.

All frequencies are quoted in units of the agent splitting omega0 and all
times in units of 1/omega0.
"""

from qrlsim.qubit import (
    KET_0,
    KET_1,
    KET_MINUS,
    KET_PLUS,
    fidelity_to_eigenstates,
    hamiltonian_unitary,
    rotation_from_angles,
)
from qrlsim.spectral import (
    NoiseSpec,
    SpectrumResult,
    asymptotic_x,
    band_density,
    gamma_fn,
    level_shift,
    memory_kernel,
    solve_bound_state,
    spectral_density,
    self_energy_Y,
)
from qrlsim.dynamics import (
    Channel,
    ChannelKind,
    TrajectoryCache,
    XTrajectory,
    apply_channel,
    born_markov_x,
    evolve,
    rates,
    solve_volterra,
)
from qrlsim.protocol import (
    EpisodeTrace,
    IterationRecord,
    QrlParams,
    measure_and_sample,
    run_episode,
    sample_rotation,
    update_action,
    update_exploration,
)
from qrlsim.experiments import (
    AggregateSeries,
    MonteCarloConfig,
    SweepRow,
    monte_carlo_curves,
    optimize_tau,
    sweep_cutoff,
    sweep_ohmicity,
    sweep_tau,
)

__version__ = "0.1.0"
