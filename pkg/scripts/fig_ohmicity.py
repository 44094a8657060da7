"""Generate the Ohmicity-dependence data set.

At weak coupling with eta*omega_c = 10/9 the bound state disappears exactly
on the index interval where Gamma(s) < 0.9.  This writes the s scan of the
spectral analysis and the s sweep of the tau-optimized fidelity, under
data/ohmicity/ by default.  The sweep is the expensive part: each index
needs its own long Volterra solve at the large cutoff.
"""

import argparse
import json
from pathlib import Path

from qrlsim.cli import main as qrlsim_main


def run(config: dict, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    path = out / "config.json"
    path.write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
    code = qrlsim_main(["--config", str(path), "--out", str(out)])
    if code != 0:
        raise SystemExit(code)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("data/ohmicity"))
    parser.add_argument("--n-episodes", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=12345)
    parser.add_argument("--s-points", type=int, default=13)
    parser.add_argument("--quick", action="store_true")
    args = parser.parse_args()
    n = 50 if args.quick else args.n_episodes

    bath = {"eta": 0.01, "omega_c": 1000.0 / 9.0}
    run(
        dict(bath, mode="spectrum", s_grid=[1.0, 2.2, 61], band_samples=48),
        args.out / "s_scan",
    )
    run(
        {
            **bath,
            "mode": "sweep-s",
            "channel": "exact",
            "s_grid": [1.0, 2.2, args.s_points],
            "tau": 100.0,
            "r": 0.1,
            "p": 1.1,
            "k_max": 100,
            "n_episodes": n,
            "master_seed": args.seed,
        },
        args.out / "s_sweep",
    )


if __name__ == "__main__":
    main()
