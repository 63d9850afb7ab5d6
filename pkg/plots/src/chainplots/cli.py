"""plots CLI: render one figure from a spec file, or all five from a run directory."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import FigureSpec, render, render_all
from .schema import FIGURE_KINDS, SchemaError

_SPEC_KEYS = {"input": str, "kind": str, "output": str, "title": str}


def load_spec(path) -> FigureSpec:
    """Flat key = value spec file; unknown keys are rejected."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SchemaError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _SPEC_KEYS:
            raise SchemaError(f"{path}:{lineno}: unknown key {key!r} (allowed: {sorted(_SPEC_KEYS)})")
        if key in values:
            raise SchemaError(f"{path}:{lineno}: duplicate key {key!r}")
        values[key] = val
    for needed in ("input", "kind", "output"):
        if needed not in values:
            raise SchemaError(f"{path}: missing required key {needed!r}")
    return FigureSpec(
        input_csv=values["input"],
        kind=values["kind"],
        output=values["output"],
        title=values.get("title", ""),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plots", description="Figures from simulation CSV output.")
    sub = parser.add_subparsers(dest="command", required=True)

    rd = sub.add_parser("render", help="render one figure from a spec file")
    rd.add_argument("--spec", required=True, help="flat key = value spec file")

    al = sub.add_parser("all", help="render the five standard figures from a run directory")
    al.add_argument("--dir", required=True, help="directory with fig1a..fig2b and table1 CSVs")
    al.add_argument("--out", default=None, help="output directory (default: same as --dir)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "render":
            written = render(load_spec(args.spec))
        else:
            written = render_all(args.dir, args.out)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
