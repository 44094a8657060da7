import math

import pytest

UNITS = "# frequencies in units of omega0; times in units of 1/omega0"


def write_csv(path, names, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [UNITS, ",".join(names)]
    for row in rows:
        lines.append(",".join("" if v is None else str(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def curve_rows(n=10, plateau=0.9):
    return [
        [k + 1, 0.71 + (plateau - 0.71) * k / (n - 1), 0.9**k, 0.002]
        for k in range(n)
    ]


SWEEP_NAMES = ["axis", "F", "W", "stderr_F"]
BATH_SWEEP_NAMES = SWEEP_NAMES + ["has_bound_state", "E_b", "Z", "tau_star"]
SPECTRUM_NAMES = [
    "axis", "has_bound_state", "E_b", "Z", "E_1", "E_2", "theta_1", "theta_2",
]


def spectrum_rows(axis_values, threshold):
    rows = []
    for v in axis_values:
        bound = v > threshold
        rows.append([
            v,
            1 if bound else 0,
            -0.05 * (v - threshold) if bound else None,
            0.8 if bound else None,
            0.01, 5.0, 0.3, 0.001,
        ])
    return rows


@pytest.fixture
def noiseless_dir(tmp_path):
    root = tmp_path / "noiseless"
    for r, p in [(0.1, 1.1), (0.3, 1.3)]:
        write_csv(
            root / f"curves_r{r}_p{p}" / "curves.csv", SWEEP_NAMES, curve_rows()
        )
    write_csv(
        root / "tau_sweep" / "tau_sweep.csv",
        SWEEP_NAMES,
        [[12.0 + 0.5 * i, 0.8 + 0.1 * math.sin(i), 0.01, 0.002] for i in range(13)],
    )
    return root


@pytest.fixture
def markov_dir(tmp_path):
    root = tmp_path / "markov"
    for tau in (5.0, 55.0):
        write_csv(root / f"curves_tau{tau:g}" / "curves.csv", SWEEP_NAMES, curve_rows())
    write_csv(
        root / "tau_sweep" / "tau_sweep.csv",
        SWEEP_NAMES,
        [[1.0 + 2.0 * i, 0.95 - 0.02 * i, 0.01, 0.002] for i in range(8)],
    )
    return root


@pytest.fixture
def spectrum_dir(tmp_path):
    root = tmp_path / "spectrum"
    write_csv(
        root / "cutoff_scan" / "spectrum.csv",
        SPECTRUM_NAMES,
        spectrum_rows([5.0, 8.0, 12.0, 20.0], threshold=10.0),
    )
    for wc in (5.0, 20.0):
        write_csv(
            root / f"xt_wc{wc:g}" / "xt.csv",
            ["t", "re_x", "im_x", "abs_x"],
            [[0.1 * i, 0.9, 0.1, 1.0 - 0.01 * i] for i in range(30)],
        )
    write_csv(
        root / "cutoff_sweep" / "cutoff_sweep.csv",
        BATH_SWEEP_NAMES,
        [
            [5.0, 0.80, 0.01, 0.003, 0, None, None, 100.5],
            [20.0, 0.92, 0.01, 0.002, 1, -0.78, 0.84, 102.1],
        ],
    )
    return root


@pytest.fixture
def ohmicity_dir(tmp_path):
    root = tmp_path / "ohmicity"
    write_csv(
        root / "s_scan" / "spectrum.csv",
        SPECTRUM_NAMES,
        spectrum_rows([1.0, 1.2, 1.4, 1.8, 2.0], threshold=1.65),
    )
    write_csv(
        root / "s_sweep" / "ohmicity_sweep.csv",
        BATH_SWEEP_NAMES,
        [
            [1.0, 0.93, 0.01, 0.002, 1, -0.1, 0.9, 100.2],
            [1.4, 0.81, 0.01, 0.003, 0, None, None, 99.8],
            [2.0, 0.94, 0.01, 0.002, 1, -0.2, 0.92, 101.0],
        ],
    )
    return root
