"""CSV schema layer: parsing, column checks, and named errors.

The simulation CSVs are plain comma-separated tables with one leading
comment line stating the unit conventions and a header row; empty cells
stand for not-applicable values and load as NaN.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


class SchemaError(ValueError):
    """A CSV is missing, empty, or lacks a required column."""


@dataclass(frozen=True)
class Table:
    path: Path
    units: str
    names: tuple
    columns: dict

    def __getitem__(self, name: str) -> np.ndarray:
        try:
            return self.columns[name]
        except KeyError:
            raise SchemaError(
                f"{self.path}: missing column '{name}' (has: {', '.join(self.names)})"
            ) from None

    @property
    def n_rows(self) -> int:
        return len(self.columns[self.names[0]])


def load_table(path) -> Table:
    path = Path(path)
    if not path.is_file():
        raise SchemaError(f"{path}: no such CSV file")
    lines = path.read_text(encoding="utf-8").splitlines()
    units = ""
    while lines and lines[0].startswith("#"):
        units = lines.pop(0).lstrip("# ").strip()
    if not lines:
        raise SchemaError(f"{path}: empty CSV, no header row")
    names = tuple(name.strip() for name in lines.pop(0).split(","))
    rows = [line.split(",") for line in lines if line.strip()]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    if any(len(row) != len(names) for row in rows):
        raise SchemaError(f"{path}: ragged rows, expected {len(names)} cells each")
    columns = {}
    for j, name in enumerate(names):
        cells = [row[j].strip() for row in rows]
        try:
            columns[name] = np.array(
                [float(c) if c else np.nan for c in cells], dtype=float
            )
        except ValueError as exc:
            raise SchemaError(f"{path}: column '{name}' is not numeric: {exc}") from exc
    return Table(path=path, units=units, names=names, columns=columns)


def require(table: Table, *names: str) -> None:
    for name in names:
        table[name]


def band_columns(table: Table) -> tuple:
    """Paired (E_i, theta_i) sample columns of a spectrum table, as arrays."""
    e_names = sorted(
        (n for n in table.names if n.startswith("E_") and n != "E_b"),
        key=lambda n: int(n.split("_")[1]),
    )
    if not e_names:
        raise SchemaError(f"{table.path}: no band sample columns E_1..E_n")
    energies = np.column_stack([table[n] for n in e_names])
    weights = np.column_stack([table[f"theta_{n.split('_')[1]}"] for n in e_names])
    return energies, weights
