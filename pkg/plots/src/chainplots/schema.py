"""CSV schemas for the five figure kinds, with column-level diagnostics.

Input files are the chain-simulation CSV outputs; each figure kind needs a
specific set of numeric columns. Extra columns (provenance fields like
protocol, init, gs_residual) are always allowed.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

FIGURE_KINDS = (
    "fidelity-vs-time",
    "capacity-vs-N",
    "fidelity-vs-N",
    "fidelity-vs-delta",
    "table1-bars",
)

REQUIRED_COLUMNS = {
    "fidelity-vs-time": ("t", "f_I", "f_x", "f_y", "f_z"),
    "capacity-vs-N": ("n", "holevo_bits", "t_star_holevo"),
    "fidelity-vs-N": ("n", "f_avm", "t_star"),
    "fidelity-vs-delta": ("delta", "peak", "t_star", "window_exhausted"),
    "table1-bars": ("n", "fm", "afm", "favm"),
}

OPTIONAL_COLUMNS = {
    "fidelity-vs-time": ("mean_fidelity", "holevo"),
    "capacity-vs-N": ("t_star_fidelity", "mean_fidelity"),
    "fidelity-vs-N": ("fit_slope", "fit_intercept", "fit_value"),
    "fidelity-vs-delta": (),
    "table1-bars": ("fm_t_star", "afm_t_star", "favm_t_star"),
}


class SchemaError(ValueError):
    """Input CSV does not match the figure kind's schema."""


@dataclass
class Table:
    path: str
    columns: list
    rows: list  # list of dicts, numeric fields converted to float

    def column(self, name: str):
        import numpy as np

        return np.array([row[name] for row in self.rows])

    def has(self, name: str) -> bool:
        return name in self.columns and all(row.get(name) is not None for row in self.rows)


def _to_number(text: str):
    text = text.strip()
    if text == "":
        return None
    if text in ("true", "True"):
        return 1.0
    if text in ("false", "False"):
        return 0.0
    return float(text)


def load_table(path, kind: str) -> Table:
    """Read and validate a CSV against the figure kind's schema.

    Raises SchemaError with explicit column diagnostics: which required
    columns are missing, which were found, and where a value fails to parse.
    """
    if kind not in FIGURE_KINDS:
        raise SchemaError(f"unknown figure kind {kind!r}; expected one of {FIGURE_KINDS}")
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"input file does not exist: {path}")
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        required = REQUIRED_COLUMNS[kind]
        missing = [c for c in required if c not in header]
        if missing:
            raise SchemaError(
                f"{path}: missing column(s) {missing} required for {kind!r}; "
                f"found columns {header}"
            )
        numeric = set(required) | set(OPTIONAL_COLUMNS[kind])
        rows = []
        for lineno, raw in enumerate(reader, start=2):
            row = {}
            for name, value in raw.items():
                if name in numeric:
                    try:
                        row[name] = _to_number(value)
                    except (TypeError, ValueError):
                        raise SchemaError(
                            f"{path}:{lineno}: column {name!r} has non-numeric value {value!r}"
                        )
                else:
                    row[name] = value
            rows.append(row)
    if not rows:
        raise SchemaError(f"{path}: no data rows (header only)")
    return Table(path=str(path), columns=list(header), rows=rows)
