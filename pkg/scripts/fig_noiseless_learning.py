"""Generate the noiseless learning-curve data set.

Writes one curves.csv per (r, p) pair at the working interaction time plus
a fine tau sweep of the final-iteration fidelity, all under data/noiseless/
by default.  Full scale is N = 1000 episodes; pass --quick for a smoke run.
"""

import argparse
import json
import math
from pathlib import Path

from qrlsim.cli import main as qrlsim_main

RP_GRID = [(0.1, 1.1), (0.3, 1.3), (0.5, 1.5), (0.7, 1.7)]
TAU = 15.65


def run(config: dict, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    path = out / "config.json"
    path.write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
    code = qrlsim_main(["--config", str(path), "--out", str(out)])
    if code != 0:
        raise SystemExit(code)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("data/noiseless"))
    parser.add_argument("--n-episodes", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=12345)
    parser.add_argument("--quick", action="store_true",
                        help="N = 50 smoke run for layout checks")
    args = parser.parse_args()
    n = 50 if args.quick else args.n_episodes

    base = {
        "channel": "noiseless",
        "tau": TAU,
        "k_max": 100,
        "n_episodes": n,
        "master_seed": args.seed,
    }
    for r, p in RP_GRID:
        run(
            dict(base, mode="run", r=r, p=p),
            args.out / f"curves_r{r:.1f}_p{p:.1f}",
        )
    # two periods of the tau oscillation at 40 points per period
    run(
        dict(base, mode="sweep-tau", tau_grid=[12.0, 12.0 + 4.0 * math.pi, 81]),
        args.out / "tau_sweep",
    )


if __name__ == "__main__":
    main()
