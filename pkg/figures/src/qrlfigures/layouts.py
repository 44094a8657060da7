"""The four standard figure layouts, built from loaded tables only.

Every builder returns a matplotlib Figure with fixed geometry; nothing here
reads the clock or any global state, so rendering is reproducible byte for
byte at fixed DPI.
"""

from __future__ import annotations

import re
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schema import SchemaError, Table, band_columns, load_table, require

K_LABEL = "iteration $k$"
TAU_LABEL = r"$\tau\ (1/\omega_0)$"
F_LABEL = r"mean fidelity $F$"
W_LABEL = r"mean exploration $W$"

_CURVE_COLUMNS = ("axis", "F", "W", "stderr_F")


def _labeled_tables(data_dir: Path, pattern: str, filename: str, tag: str) -> list:
    """(label, table) pairs from per-run subdirectories, in sorted order."""
    paths = sorted(Path(data_dir).glob(f"{pattern}/{filename}"))
    if not paths:
        raise SchemaError(f"{data_dir}: no {pattern}/{filename} inputs found")
    out = []
    for path in paths:
        table = load_table(path)
        require(table, *_CURVE_COLUMNS)
        out.append((_label_from_dir(path.parent.name, tag), table))
    return out


def _label_from_dir(name: str, tag: str) -> str:
    if tag == "rp":
        match = re.search(r"r([0-9.]+)_p([0-9.]+)", name)
        if match:
            return f"$r={match.group(1)}$, $p={match.group(2)}$"
    if tag == "tau":
        match = re.search(r"tau([0-9.]+)", name)
        if match:
            return rf"$\tau={match.group(1)}/\omega_0$"
    if tag == "wc":
        match = re.search(r"wc([0-9.]+)", name)
        if match:
            return rf"$\omega_c={match.group(1)}\,\omega_0$"
    return name


def _curve_grid(curves: list, sweep: Table, title: str):
    fig, axes = plt.subplots(2, 2, figsize=(9.0, 6.4), constrained_layout=True)
    (ax_fk, ax_wk), (ax_ft, ax_wt) = axes
    for label, table in curves:
        ax_fk.plot(table["axis"], table["F"], label=label)
        ax_wk.semilogy(table["axis"], table["W"], label=label)
    ax_fk.set_xlabel(K_LABEL)
    ax_fk.set_ylabel(F_LABEL)
    ax_fk.axhline(1.0 / np.sqrt(2.0), ls=":", c="gray", lw=0.8)
    ax_fk.legend(fontsize=8)
    ax_wk.set_xlabel(K_LABEL)
    ax_wk.set_ylabel(W_LABEL)

    require(sweep, *_CURVE_COLUMNS)
    ax_ft.errorbar(sweep["axis"], sweep["F"], yerr=sweep["stderr_F"],
                   fmt="o-", ms=3, lw=1)
    ax_ft.set_xlabel(TAU_LABEL)
    ax_ft.set_ylabel(F_LABEL)
    ax_wt.plot(sweep["axis"], sweep["W"], "o-", ms=3, lw=1)
    ax_wt.set_xlabel(TAU_LABEL)
    ax_wt.set_ylabel(W_LABEL)
    fig.suptitle(title)
    return fig


def build_noiseless(data_dir: Path):
    """Learning curves for each (r, p) plus the periodic tau dependence."""
    curves = _labeled_tables(data_dir, "curves_*", "curves.csv", "rp")
    sweep = load_table(Path(data_dir) / "tau_sweep" / "tau_sweep.csv")
    return _curve_grid(curves, sweep, "noiseless protocol")


def build_markov(data_dir: Path):
    """Learning curves at several tau plus the saturating tau dependence."""
    curves = _labeled_tables(data_dir, "curves_*", "curves.csv", "tau")
    sweep = load_table(Path(data_dir) / "tau_sweep" / "tau_sweep.csv")
    return _curve_grid(curves, sweep, "Born-Markov channel")


def _spectrum_panel(ax, scan: Table, axis_label: str):
    """Bound-state energy vs the scanned parameter over the shaded band."""
    require(scan, "axis", "has_bound_state", "E_b", "Z")
    energies, weights = band_columns(scan)
    top = float(np.nanmax(energies))
    ax.axhspan(0.0, top, color="0.85", zorder=0, label="continuum band")
    present = scan["has_bound_state"] > 0.5
    points = ax.scatter(
        scan["axis"][present], scan["E_b"][present],
        c=scan["Z"][present], cmap="viridis", vmin=0.0, vmax=1.0,
        s=18, zorder=3, label=r"bound state $E_b$",
    )
    ax.set_xlabel(axis_label)
    ax.set_ylabel(r"$E\ (\omega_0)$")
    ax.set_yscale("symlog", linthresh=1e-2)
    ax.legend(fontsize=8, loc="lower right")
    return points


def build_spectrum(data_dir: Path):
    """Cutoff scan of the spectrum, |x(t)| above/below threshold, and F."""
    data_dir = Path(data_dir)
    scan = load_table(data_dir / "cutoff_scan" / "spectrum.csv")
    xt_paths = sorted(data_dir.glob("xt_*/xt.csv"))
    if not xt_paths:
        raise SchemaError(f"{data_dir}: no xt_*/xt.csv inputs found")
    sweep = load_table(data_dir / "cutoff_sweep" / "cutoff_sweep.csv")
    require(sweep, "axis", "F", "stderr_F", "has_bound_state")

    fig, (ax_spec, ax_xt, ax_f) = plt.subplots(
        1, 3, figsize=(12.0, 3.6), constrained_layout=True
    )
    points = _spectrum_panel(ax_spec, scan, r"$\omega_c\ (\omega_0)$")
    fig.colorbar(points, ax=ax_spec, label="residue $Z$")

    for path in xt_paths:
        table = load_table(path)
        require(table, "t", "abs_x")
        ax_xt.plot(table["t"], table["abs_x"],
                   label=_label_from_dir(path.parent.name, "wc"))
    ax_xt.set_xlabel(r"$t\ (1/\omega_0)$")
    ax_xt.set_ylabel("$|x(t)|$")
    ax_xt.set_ylim(0.0, 1.05)
    ax_xt.legend(fontsize=8)

    ax_f.errorbar(sweep["axis"], sweep["F"], yerr=sweep["stderr_F"],
                  fmt="o-", ms=4, lw=1)
    ax_f.set_xlabel(r"$\omega_c\ (\omega_0)$")
    ax_f.set_ylabel(F_LABEL)
    return fig


def build_ohmicity(data_dir: Path):
    """Spectrum and optimized fidelity across the Ohmicity index."""
    data_dir = Path(data_dir)
    scan = load_table(data_dir / "s_scan" / "spectrum.csv")
    sweep = load_table(data_dir / "s_sweep" / "ohmicity_sweep.csv")
    require(sweep, "axis", "F", "stderr_F", "has_bound_state")

    fig, (ax_spec, ax_f) = plt.subplots(
        1, 2, figsize=(9.0, 3.6), constrained_layout=True
    )
    points = _spectrum_panel(ax_spec, scan, "Ohmicity index $s$")
    fig.colorbar(points, ax=ax_spec, label="residue $Z$")

    absent = sweep["has_bound_state"] < 0.5
    if np.any(absent):
        lo = float(np.min(sweep["axis"][absent]))
        hi = float(np.max(sweep["axis"][absent]))
        ax_f.axvspan(lo, hi, color="0.9", zorder=0, label="no bound state")
    ax_f.errorbar(sweep["axis"], sweep["F"], yerr=sweep["stderr_F"],
                  fmt="o-", ms=4, lw=1)
    ax_f.set_xlabel("Ohmicity index $s$")
    ax_f.set_ylabel(F_LABEL)
    ax_f.legend(fontsize=8)
    return fig


BUILDERS = {
    "noiseless": build_noiseless,
    "markov": build_markov,
    "spectrum": build_spectrum,
    "ohmicity": build_ohmicity,
}
