"""Figure rendering for the simulation's CSV outputs."""

from .cli import render_figure
from .layouts import BUILDERS, build_markov, build_noiseless, build_ohmicity, build_spectrum
from .schema import SchemaError, Table, load_table, require

__version__ = "0.1.0"

__all__ = [
    "BUILDERS",
    "SchemaError",
    "Table",
    "build_markov",
    "build_noiseless",
    "build_ohmicity",
    "build_spectrum",
    "load_table",
    "render_figure",
    "require",
]
