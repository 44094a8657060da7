"""Render one of the standard figures from a CSV data directory.

Usage: qrlfig {noiseless|markov|spectrum|ohmicity} --data DIR --out PATH
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .layouts import BUILDERS
from .schema import SchemaError

DPI = 200


def render_figure(name: str, data_dir, output) -> Path:
    """Build the named layout from data_dir and write it to output."""
    if name not in BUILDERS:
        raise SchemaError(f"unknown figure '{name}' (have: {', '.join(BUILDERS)})")
    fig = BUILDERS[name](Path(data_dir))
    output = Path(output)
    output.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(output, dpi=DPI, metadata={"Software": "qrlfig"})
    return output


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="qrlfig", description=__doc__)
    parser.add_argument("figure", choices=sorted(BUILDERS))
    parser.add_argument("--data", type=Path, required=True,
                        help="directory of CSV outputs from the simulation runs")
    parser.add_argument("--out", type=Path, required=True,
                        help="output image path (.png)")
    args = parser.parse_args(argv)
    try:
        path = render_figure(args.figure, args.data, args.out)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(path)
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
