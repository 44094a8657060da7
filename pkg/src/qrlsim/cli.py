"""Command-line entry point: structured run configuration and CSV/JSON output.

A run is described by a flat key set (bath, protocol, ensemble, grids) read
from a JSON file and/or command-line flags, with flags taking precedence.
Every run writes its result CSVs plus a manifest.json capturing the full
effective configuration; feeding a manifest back via --config reproduces
the CSVs byte for byte.

Exit codes: 0 success, 2 configuration error, 1 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .dynamics import (
    Channel,
    ChannelKind,
    born_markov_x,
    default_time_step,
    solve_volterra,
)
from .experiments import (
    MonteCarloConfig,
    monte_carlo_curves,
    sweep_cutoff,
    sweep_ohmicity,
    sweep_tau,
)
from .protocol import QrlParams
from .spectral import NoiseSpec, band_density, solve_bound_state

UNITS_COMMENT = "# frequencies in units of omega0; times in units of 1/omega0"

_MODES = ("spectrum", "xt", "run", "sweep-tau", "sweep-cutoff", "sweep-s")
_CHANNELS = {
    "noiseless": ChannelKind.NOISELESS,
    "bma": ChannelKind.BORN_MARKOV,
    "exact": ChannelKind.EXACT_NON_MARKOVIAN,
}


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending key."""


@dataclass
class RunConfig:
    mode: str
    channel: str = "noiseless"
    eta: float = 0.1
    omega_c: float = 10.0
    s: float = 1.0
    omega0: float = 1.0
    r: float = 0.1
    p: float = 1.1
    tau: float = 15.65
    k_max: int = 100
    n_episodes: int = 1000
    master_seed: int = 12345
    n_threads: int = 1
    out_dir: str = "."
    t_max: float = 220.0
    dt: Optional[float] = None
    tau_grid: Optional[list] = None
    omega_c_grid: Optional[list] = None
    s_grid: Optional[list] = None
    tau_window: Optional[list] = None
    include_bma: bool = True
    band_samples: int = 16

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrlsim",
        description=(
            "Quantum reinforcement learning eigensolver with exact "
            "non-Markovian decoherence and bound-state spectral analysis"
        ),
    )
    parser.add_argument("--config", type=str, default=None, metavar="PATH",
                        help="JSON run configuration (a manifest.json also works)")
    parser.add_argument("--mode", type=str, default=None, choices=_MODES)
    parser.add_argument("--channel", type=str, default=None,
                        choices=sorted(_CHANNELS))
    parser.add_argument("--seed", type=int, default=None, dest="master_seed")
    parser.add_argument("--out", type=str, default=None, dest="out_dir", metavar="DIR")
    parser.add_argument("--eta", type=float, default=None)
    parser.add_argument("--omega-c", type=float, default=None, dest="omega_c")
    parser.add_argument("--s", type=float, default=None)
    parser.add_argument("--r", type=float, default=None)
    parser.add_argument("--p", type=float, default=None)
    parser.add_argument("--tau", type=float, default=None)
    parser.add_argument("--kmax", type=int, default=None, dest="k_max")
    parser.add_argument("--n-episodes", type=int, default=None, dest="n_episodes")
    parser.add_argument("--threads", type=int, default=None, dest="n_threads")
    return parser


def _coerce(key: str, value, kind: type):
    try:
        if kind is bool:
            if isinstance(value, bool):
                return value
            raise ValueError("expected true/false")
        coerced = kind(value)
        if kind is int and isinstance(value, float) and value != coerced:
            raise ValueError("expected an integer")
        return coerced
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config key '{key}': {exc}") from exc


def load_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, config file, and flags (in rising precedence)."""
    fields = {f.name: f for f in dataclasses.fields(RunConfig)}
    merged = {name: f.default for name, f in fields.items()}

    if args.config is not None:
        path = Path(args.config)
        if not path.is_file():
            raise ConfigError(f"config key 'config': file not found: {path}")
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config key 'config': invalid JSON: {exc}") from exc
        if isinstance(payload, dict) and "config" in payload:
            payload = payload["config"]  # accept a manifest verbatim
        if not isinstance(payload, dict):
            raise ConfigError("config key 'config': expected a JSON object")
        for key, value in payload.items():
            if key not in fields:
                raise ConfigError(f"config key '{key}': unknown key")
            merged[key] = value

    for key in fields:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            merged[key] = flag_value

    scalar_types = {
        "mode": str, "channel": str, "out_dir": str,
        "eta": float, "omega_c": float, "s": float, "omega0": float,
        "r": float, "p": float, "tau": float, "t_max": float,
        "k_max": int, "n_episodes": int, "master_seed": int,
        "n_threads": int, "band_samples": int, "include_bma": bool,
    }
    for key, kind in scalar_types.items():
        merged[key] = _coerce(key, merged[key], kind)
    if merged["dt"] is not None:
        merged["dt"] = _coerce("dt", merged["dt"], float)
    for key in ("tau_grid", "omega_c_grid", "s_grid"):
        if merged[key] is not None:
            merged[key] = _validated_triple(key, merged[key])
    if merged["tau_window"] is not None:
        merged["tau_window"] = _validated_pair("tau_window", merged["tau_window"])

    if merged["mode"] is None:
        raise ConfigError("config key 'mode': required (one of %s)" % ", ".join(_MODES))
    if merged["mode"] not in _MODES:
        raise ConfigError(f"config key 'mode': unknown mode '{merged['mode']}'")
    if merged["channel"] not in _CHANNELS:
        raise ConfigError(f"config key 'channel': unknown channel '{merged['channel']}'")
    if merged["band_samples"] < 1:
        raise ConfigError("config key 'band_samples': must be >= 1")

    rc = RunConfig(**merged)
    _build_domain_objects(rc)  # fail fast on physical-parameter violations

    if not (math.isfinite(rc.t_max) and rc.t_max > 0.0):
        raise ConfigError(f"config key 't_max': must be finite and > 0, got {rc.t_max}")
    if rc.dt is not None:
        limit = min(0.05 / rc.omega0, 0.5 / rc.omega_c)
        if not (0.0 < rc.dt <= limit * (1.0 + 1e-12)):
            raise ConfigError(
                "config key 'dt': must satisfy 0 < dt <= "
                f"min(0.05/omega0, 0.5/omega_c) = {limit:.3e}, got {rc.dt}"
            )
    effective_dt = rc.dt if rc.dt is not None else min(
        0.01 / rc.omega0, 0.25 / rc.omega_c
    )
    if rc.t_max < effective_dt:
        raise ConfigError(
            f"config key 't_max': must cover at least one step dt = {effective_dt}"
        )
    return rc


def _validated_triple(key: str, value) -> list:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 3
        or not all(isinstance(v, (int, float)) for v in value)
    ):
        raise ConfigError(f"config key '{key}': expected [lo, hi, n]")
    lo, hi, n = float(value[0]), float(value[1]), value[2]
    if not (isinstance(n, int) or float(n).is_integer()) or int(n) < 1:
        raise ConfigError(f"config key '{key}': n must be an integer >= 1")
    if not (math.isfinite(lo) and math.isfinite(hi)) or (int(n) > 1 and hi <= lo):
        raise ConfigError(f"config key '{key}': need finite lo < hi")
    return [lo, hi, int(n)]


def _validated_pair(key: str, value) -> list:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, (int, float)) for v in value)
    ):
        raise ConfigError(f"config key '{key}': expected [lo, hi]")
    lo, hi = float(value[0]), float(value[1])
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ConfigError(f"config key '{key}': need finite lo < hi")
    return [lo, hi]


def _grid(triple: list) -> np.ndarray:
    lo, hi, n = triple
    return np.linspace(lo, hi, n)


def _build_domain_objects(rc: RunConfig):
    """(spec, channel, params, mc_config) with errors mapped to config keys."""
    try:
        spec = NoiseSpec(eta=rc.eta, omega_c=rc.omega_c, s=rc.s, omega0=rc.omega0)
    except ValueError as exc:
        raise ConfigError(f"config key 'eta/omega_c/s/omega0': {exc}") from exc
    kind = _CHANNELS[rc.channel]
    channel = Channel(kind, None if kind is ChannelKind.NOISELESS else spec)
    try:
        params = QrlParams(r=rc.r, p=rc.p, tau=rc.tau, k_max=rc.k_max, channel=channel)
    except ValueError as exc:
        raise ConfigError(f"config key 'r/p/tau/k_max': {exc}") from exc
    try:
        mc = MonteCarloConfig(
            params=params,
            n_episodes=rc.n_episodes,
            master_seed=rc.master_seed,
            n_threads=rc.n_threads,
        )
    except ValueError as exc:
        raise ConfigError(f"config key 'n_episodes/master_seed/n_threads': {exc}") from exc
    return spec, channel, params, mc


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_csv(path: Path, names: list, columns: list) -> Path:
    """Plain CSV with a units comment line; floats in shortest round-trip form."""
    n_rows = len(columns[0])
    lines = [UNITS_COMMENT, ",".join(names)]
    for i in range(n_rows):
        lines.append(",".join(_format_value(col[i]) for col in columns))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


def _write_manifest(rc: RunConfig, out: Path, started: float, dt_used) -> Path:
    manifest = {
        "config": rc.to_dict(),
        "runtime": {
            "version": __version__,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "wall_clock_s": round(time.time() - started, 3),
            "trajectory_dt": dt_used,
        },
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    return path


def cmd_spectrum(rc: RunConfig, out: Path) -> list:
    spec, _, _, _ = _build_domain_objects(rc)
    if (rc.omega_c_grid is None) == (rc.s_grid is None):
        raise ConfigError(
            "config key 'omega_c_grid/s_grid': spectrum mode needs exactly one of them"
        )
    if rc.omega_c_grid is not None:
        axis = _grid(rc.omega_c_grid)
        specs = [dataclasses.replace(spec, omega_c=float(v)) for v in axis]
    else:
        axis = _grid(rc.s_grid)
        specs = [dataclasses.replace(spec, s=float(v)) for v in axis]

    n_band = rc.band_samples
    names = ["axis", "has_bound_state", "E_b", "Z"]
    names += [f"E_{i + 1}" for i in range(n_band)]
    names += [f"theta_{i + 1}" for i in range(n_band)]
    rows = {name: [] for name in names}
    for value, point in zip(axis, specs):
        pole = solve_bound_state(point)
        rows["axis"].append(float(value))
        rows["has_bound_state"].append(pole.has_bound_state)
        rows["E_b"].append(pole.E_b)
        rows["Z"].append(pole.Z)
        energies = np.geomspace(1e-3 * point.omega0,
                                point.omega0 + 10.0 * point.omega_c, n_band)
        for i, energy in enumerate(energies):
            rows[f"E_{i + 1}"].append(float(energy))
            rows[f"theta_{i + 1}"].append(band_density(float(energy), point))
    return [write_csv(out / "spectrum.csv", names, [rows[n] for n in names])]


def cmd_xt(rc: RunConfig, out: Path) -> list:
    spec, _, _, _ = _build_domain_objects(rc)
    dt = rc.dt if rc.dt is not None else default_time_step(spec)
    traj = solve_volterra(spec, rc.t_max, dt)
    names = ["t", "re_x", "im_x", "abs_x"]
    columns = [traj.times, traj.values.real, traj.values.imag, np.abs(traj.values)]
    if rc.include_bma:
        bma = born_markov_x(traj.times, spec)
        names += ["re_x_bma", "im_x_bma", "abs_x_bma"]
        columns += [bma.real, bma.imag, np.abs(bma)]
    return [write_csv(out / "xt.csv", names, columns)]


def cmd_run(rc: RunConfig, out: Path) -> list:
    _, _, _, mc = _build_domain_objects(rc)
    series = monte_carlo_curves(mc)
    return [
        write_csv(
            out / "curves.csv",
            ["axis", "F", "W", "stderr_F"],
            [series.axis, series.F, series.W, series.stderr_F],
        )
    ]


def _default_window(rc: RunConfig) -> list:
    if rc.tau_window is not None:
        return rc.tau_window
    half = math.pi / rc.omega0
    return [max(0.0, rc.tau - half), max(0.0, rc.tau - half) + 2.0 * half]


def cmd_sweep(rc: RunConfig, out: Path) -> list:
    _, _, _, mc = _build_domain_objects(rc)
    if rc.mode == "sweep-tau":
        if rc.tau_grid is None:
            raise ConfigError("config key 'tau_grid': required for mode sweep-tau")
        series = sweep_tau(mc, _grid(rc.tau_grid))
        return [
            write_csv(
                out / "tau_sweep.csv",
                ["axis", "F", "W", "stderr_F"],
                [series.axis, series.F, series.W, series.stderr_F],
            )
        ]

    if rc.mode == "sweep-cutoff":
        if rc.omega_c_grid is None:
            raise ConfigError("config key 'omega_c_grid': required for mode sweep-cutoff")
        rows = sweep_cutoff(mc, _grid(rc.omega_c_grid), _default_window(rc))
        filename = "cutoff_sweep.csv"
    else:
        if rc.s_grid is None:
            raise ConfigError("config key 's_grid': required for mode sweep-s")
        rows = sweep_ohmicity(mc, _grid(rc.s_grid))
        filename = "ohmicity_sweep.csv"

    names = ["axis", "F", "W", "stderr_F", "has_bound_state", "E_b", "Z", "tau_star"]
    columns = [[getattr(row, name) for row in rows] for name in names]
    return [write_csv(out / filename, names, columns)]


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.time()
    try:
        rc = load_config(args)
        out = Path(rc.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        handler = {
            "spectrum": cmd_spectrum,
            "xt": cmd_xt,
            "run": cmd_run,
            "sweep-tau": cmd_sweep,
            "sweep-cutoff": cmd_sweep,
            "sweep-s": cmd_sweep,
        }[rc.mode]
        written = handler(rc, out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        # domain-level precondition failures (grids, windows, parameters)
        # are configuration problems even when raised past load_config
        print(f"error: {exc}", file=sys.stderr)
        return 2
    dt_used = None
    if rc.mode in ("xt", "run", "sweep-tau", "sweep-cutoff", "sweep-s"):
        spec, channel, _, _ = _build_domain_objects(rc)
        if rc.mode == "xt" or channel.kind is ChannelKind.EXACT_NON_MARKOVIAN:
            dt_used = rc.dt if rc.dt is not None else default_time_step(spec)
    written.append(_write_manifest(rc, out, started, dt_used))
    for path in written:
        print(path)
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
