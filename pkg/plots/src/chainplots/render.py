"""Deterministic figure rendering from validated tables.

Every renderer writes both PNG and SVG with pinned size, fonts, and
hash salt, and no embedded dates, so re-rendering identical input produces
byte-identical files. Inputs are never modified.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schema import FIGURE_KINDS, SchemaError, Table, load_table

_RC = {
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 130,
    "savefig.dpi": 130,
    "font.size": 11,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "chainplots",
}


@dataclass(frozen=True)
class FigureSpec:
    input_csv: str
    kind: str
    output: str  # stem; .png and .svg are appended
    title: str = ""

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}")


def _finish(fig, output: str) -> list:
    out = Path(output)
    out.parent.mkdir(parents=True, exist_ok=True)
    written = []
    for ext in (".png", ".svg"):
        path = out.with_suffix(ext)
        fig.savefig(path, metadata={"Date": None} if ext == ".svg" else None)
        written.append(str(path))
    plt.close(fig)
    return written


def _plot_fidelity_vs_time(table: Table, ax):
    t = table.column("t")
    for name, style in (("f_I", "-"), ("f_x", "--"), ("f_y", ":"), ("f_z", "-.")):
        ax.plot(t, table.column(name), style, label=name.replace("f_", "F^"))
    basis = table.column("mean_fidelity") if table.has("mean_fidelity") else table.column("f_x")
    k = int(np.argmax(basis))
    ax.axvline(t[k], color="gray", linestyle="--", linewidth=1)
    ax.annotate(f"t* = {t[k]:.2f}", (t[k], ax.get_ylim()[1]), textcoords="offset points",
                xytext=(5, -12), fontsize=9)
    ax.set_xlabel("t J")
    ax.set_ylabel("Bell fidelity")
    ax.legend(loc="center right", fontsize=9)


def _plot_capacity_vs_n(table: Table, ax):
    n = table.column("n")
    ax.plot(n, table.column("holevo_bits"), "o-", color="tab:blue")
    ax.axhline(1.0, color="gray", linestyle=":", linewidth=1)
    ax.set_xlabel("N")
    ax.set_ylabel("C(t*) [bits]")
    inset = ax.inset_axes([0.55, 0.55, 0.4, 0.38])
    inset.plot(n, table.column("t_star_holevo"), "s-", color="tab:red", markersize=3)
    inset.set_xlabel("N", fontsize=8)
    inset.set_ylabel("t*", fontsize=8)
    inset.tick_params(labelsize=7)
    inset.grid(alpha=0.3)


def _plot_fidelity_vs_n(table: Table, ax):
    n = table.column("n")
    ax.plot(n, table.column("f_avm"), "o", color="tab:blue", label="F_av(t*)")
    if table.has("fit_slope") and table.has("fit_intercept"):
        slope = table.column("fit_slope")[0]
        intercept = table.column("fit_intercept")[0]
        xs = np.linspace(n.min(), n.max(), 50)
        ax.plot(xs, slope * xs + intercept, "--", color="tab:red",
                label=f"fit {slope:.4f} N + {intercept:.3f}")
    ax.set_xlabel("N")
    ax.set_ylabel("average fidelity")
    ax.legend(fontsize=9)


def _plot_fidelity_vs_delta(table: Table, ax):
    d = table.column("delta")
    ax.plot(d, table.column("peak"), "o-", color="tab:blue")
    exhausted = table.column("window_exhausted").astype(bool)
    if np.any(exhausted):
        ax.plot(d[exhausted], table.column("peak")[exhausted], "x", color="tab:red",
                markersize=10, label="window exhausted")
        ax.legend(fontsize=9)
    ax.set_xlabel("dimerization")
    ax.set_ylabel("average fidelity at t*")
    inset = ax.inset_axes([0.12, 0.12, 0.4, 0.38])
    inset.plot(d[~exhausted], table.column("t_star")[~exhausted], "s-",
               color="tab:red", markersize=3)
    inset.set_xlabel("dimerization", fontsize=8)
    inset.set_ylabel("t*", fontsize=8)
    inset.tick_params(labelsize=7)
    inset.grid(alpha=0.3)


def _plot_table1_bars(table: Table, ax):
    n = table.column("n")
    width = 0.27
    x = np.arange(len(n))
    for k, (col, label, color) in enumerate(
        (("fm", "FM attach", "tab:orange"),
         ("afm", "AFM attach", "tab:green"),
         ("favm", "encoded rotation", "tab:blue"))
    ):
        ax.bar(x + (k - 1) * width, table.column(col), width, label=label, color=color)
    ax.set_xticks(x, [f"{int(v)}" for v in n])
    ax.set_xlabel("N")
    ax.set_ylabel("average fidelity at t*")
    ax.set_ylim(0.5, 1.02)
    ax.legend(fontsize=9, loc="lower left")


_RENDERERS = {
    "fidelity-vs-time": _plot_fidelity_vs_time,
    "capacity-vs-N": _plot_capacity_vs_n,
    "fidelity-vs-N": _plot_fidelity_vs_n,
    "fidelity-vs-delta": _plot_fidelity_vs_delta,
    "table1-bars": _plot_table1_bars,
}

# conventional file names emitted by the simulation runner
STANDARD_FIGURES = (
    ("fig1a.csv", "fidelity-vs-time", "fig1a"),
    ("fig1b.csv", "capacity-vs-N", "fig1b"),
    ("fig2a.csv", "fidelity-vs-N", "fig2a"),
    ("fig2b.csv", "fidelity-vs-delta", "fig2b"),
    ("table1.csv", "table1-bars", "table1"),
)


def render(spec: FigureSpec) -> list:
    """Render one figure; returns the written file paths (PNG then SVG).

    Validation happens before any file is touched, so a schema violation
    never leaves a partial image behind.
    """
    table = load_table(spec.input_csv, spec.kind)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        _RENDERERS[spec.kind](table, ax)
        if spec.title:
            ax.set_title(spec.title)
        fig.tight_layout()
        return _finish(fig, spec.output)


def render_all(directory, out_dir=None) -> list:
    """Render the five standard figures from a completed run directory."""
    directory = Path(directory)
    out = Path(out_dir) if out_dir else directory
    missing = [name for name, _, _ in STANDARD_FIGURES if not (directory / name).exists()]
    if missing:
        raise SchemaError(f"{directory}: missing expected CSV file(s): {missing}")
    written = []
    for name, kind, stem in STANDARD_FIGURES:
        spec = FigureSpec(input_csv=str(directory / name), kind=kind, output=str(out / stem))
        written.extend(render(spec))
    return written
