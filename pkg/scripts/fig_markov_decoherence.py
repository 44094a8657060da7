"""Generate the Born-Markov decoherence data set.

Learning curves at short and long interaction times plus a tau sweep of the
final-iteration fidelity under the memoryless channel, showing the decay to
the 0.8 saturation plateau.  Outputs land under data/markov/ by default.
"""

import argparse
import json
from pathlib import Path

from qrlsim.cli import main as qrlsim_main

TAUS = [5.0, 15.65, 55.0]


def run(config: dict, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    path = out / "config.json"
    path.write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
    code = qrlsim_main(["--config", str(path), "--out", str(out)])
    if code != 0:
        raise SystemExit(code)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("data/markov"))
    parser.add_argument("--n-episodes", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=12345)
    parser.add_argument("--quick", action="store_true")
    args = parser.parse_args()
    n = 50 if args.quick else args.n_episodes

    base = {
        "channel": "bma",
        "eta": 0.1,
        "omega_c": 10.0,
        "s": 1.0,
        "r": 0.1,
        "p": 1.1,
        "k_max": 100,
        "n_episodes": n,
        "master_seed": args.seed,
    }
    for tau in TAUS:
        run(dict(base, mode="run", tau=tau), args.out / f"curves_tau{tau:g}")
    run(
        dict(base, mode="sweep-tau", tau_grid=[1.0, 60.0, 60]),
        args.out / "tau_sweep",
    )


if __name__ == "__main__":
    main()
