import numpy as np
import pytest


def _write(path, header, rows):
    lines = [",".join(header)]
    lines += [",".join(str(x) for x in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


@pytest.fixture()
def run_dir(tmp_path):
    """A synthetic completed run directory with all five standard CSVs."""
    t = np.round(np.arange(0.0, 24.0, 0.05), 4)
    peak = np.exp(-((t - 8.7) ** 2) / 2.0)
    fI = 0.998 - 0.5 * peak * 0.0  # stays flat
    fx = 0.0005 + 0.96 * peak
    mean = (fI + 3 * fx) / 4
    holevo = 1.8 * peak
    _write(
        tmp_path / "fig1a.csv",
        ["protocol", "n", "delta", "init", "t", "f_I", "f_x", "f_y", "f_z",
         "mean_fidelity", "holevo", "gs_residual"],
        [["classical", 8, 0.7, "gs", tt, a, b, b, b, m, h, 1e-12]
         for tt, a, b, m, h in zip(t, fI, fx, mean, holevo)],
    )
    ns = [6, 8, 10, 12]
    _write(
        tmp_path / "fig1b.csv",
        ["protocol", "n", "delta", "init", "t_star_holevo", "holevo_bits",
         "t_star_fidelity", "mean_fidelity", "gs_residual"],
        [["classical", n, 0.7, "gs", 1.05 * n + 0.4, 2.0 - 0.05 * n, 1.05 * n + 0.38,
          0.99 - 0.004 * n, 1e-12] for n in ns],
    )
    _write(
        tmp_path / "fig2a.csv",
        ["protocol", "n", "delta", "init", "t_star", "f_avm", "fit_slope",
         "fit_intercept", "fit_value", "gs_residual"],
        [["quantum", n, 0.7, "gs", 1.02 * n, 1.03 - 0.0062 * n, -0.0062, 1.03,
          1.03 - 0.0062 * n, 1e-12] for n in ns],
    )
    deltas = [0.3, 0.5, 0.7, 0.9, 0.99]
    _write(
        tmp_path / "fig2b.csv",
        ["protocol", "n", "delta", "init", "t_star", "peak", "window_exhausted",
         "gs_residual"],
        [["quantum", 12, d, "gs", 3 + 30 * d**4, 0.9 + 0.07 * (1 - abs(d - 0.7)),
          "true" if d > 0.95 else "false", 1e-12] for d in deltas],
    )
    _write(
        tmp_path / "table1.csv",
        ["n", "delta", "fm", "fm_t_star", "afm", "afm_t_star", "favm", "favm_t_star"],
        [[n, 0.7, 0.86 - 0.01 * n, 0.3 * n, 0.99 - 0.006 * n, 0.18 * n,
          1.03 - 0.0062 * n, 1.02 * n] for n in ns],
    )
    return tmp_path
