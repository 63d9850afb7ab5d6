"""Command-line interface.

Subcommands: ground-state, classical, quantum, attach, table1, sweep, fit.
Results go to --out DIR as CSV files with a companion manifest; summaries are
printed to stdout.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from .model import ChainSpec, build_chain
from .runner import (
    SweepConfig,
    attach_series_run,
    classical_series_run,
    fit_csv,
    load_config,
    quantum_series_run,
    run_sweep,
    table1_run,
)
from .solvers import ground_state
from .states import partial_trace, werner_p


def _int_list(text: str):
    return tuple(int(x) for x in text.split(","))


def _float_list(text: str):
    return tuple(float(x) for x in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dimerchain",
        description="Communication protocols on dimerized Heisenberg chains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gs = sub.add_parser("ground-state", help="ground state energy, gap, and Werner weight")
    gs.add_argument("--n", type=int, required=True)
    gs.add_argument("--delta", type=float, default=0.7)
    gs.add_argument("--tol", type=float, default=1e-10)

    for name, multi_delta in (("classical", False), ("quantum", False)):
        p = sub.add_parser(name, help=f"{name} protocol time series for one chain")
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--delta", type=float, default=0.7)
        p.add_argument("--t-max", type=float, default=None)
        p.add_argument("--dt", type=float, default=0.05)
        p.add_argument("--init", choices=("gs", "singlets"), default="gs")
        p.add_argument("--out", default="runs")

    at = sub.add_parser("attach", help="FM / AFM attaching baseline time series")
    at.add_argument("--n", type=int, required=True)
    at.add_argument("--scheme", choices=("FM", "AFM", "both"), default="both")
    at.add_argument("--t-max", type=float, default=None)
    at.add_argument("--dt", type=float, default=0.05)
    at.add_argument("--out", default="runs")

    t1 = sub.add_parser("table1", help="strategy comparison table (FM / AFM / encoded)")
    t1.add_argument("--n", type=_int_list, default=(6, 8, 10, 12))
    t1.add_argument("--delta", type=float, default=0.7)
    t1.add_argument("--dt", type=float, default=0.05)
    t1.add_argument("--init", choices=("gs", "singlets"), default="gs")
    t1.add_argument("--out", default="runs")
    t1.add_argument("--jobs", type=int, default=1)

    sw = sub.add_parser("sweep", help="run a (protocol, N, delta) sweep from a config file")
    sw.add_argument("--config", required=False, help="flat key = value config file")
    sw.add_argument("--protocol", choices=("classical", "quantum", "attach-FM", "attach-AFM"))
    sw.add_argument("--n", type=_int_list)
    sw.add_argument("--delta", type=_float_list, default=(0.7,))
    sw.add_argument("--t-max", type=float, default=None)
    sw.add_argument("--dt", type=float, default=0.05)
    sw.add_argument("--init", choices=("gs", "singlets"), default="gs")
    sw.add_argument("--out", default=None)
    sw.add_argument("--jobs", type=int, default=1)

    ft = sub.add_parser("fit", help="least-squares line through two CSV columns")
    ft.add_argument("csv")
    ft.add_argument("--x", required=True, help="x column name")
    ft.add_argument("--y", required=True, help="y column name")
    ft.add_argument("--crossing", type=float, default=None,
                    help="report where the fit reaches this level")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "ground-state":
        ham = build_chain(ChainSpec(n_qubits=args.n, delta=args.delta))
        res = ground_state(ham, tol=args.tol)
        fit = werner_p(partial_trace(res.state, (1, 2)))
        print(f"N = {args.n}  delta = {args.delta}")
        print(f"E0 = {res.energy:.12g}")
        print(f"residual = {res.residual:.3e}   gap = {res.gap:.6g}   iterations = {res.iterations}")
        print(f"werner p(rho_12) = {fit.p:.10f}   distance from Werner form = {fit.distance:.3e}")
        return 0

    if args.command == "classical":
        result = classical_series_run(
            args.n, args.delta, dt=args.dt, t_max=args.t_max, init=args.init, out_dir=args.out
        )
        print(f"wrote fig1a.csv to {args.out}")
        print(f"C(t*) = {result['peak']:.6f} bits at t* = {result['t_star']:.4f}")
        print(f"mean Bell fidelity peak = {result['peak_fidelity']:.6f} at t = {result['t_star_fidelity']:.4f}")
        return 0

    if args.command == "quantum":
        result = quantum_series_run(
            args.n, args.delta, dt=args.dt, t_max=args.t_max, init=args.init, out_dir=args.out
        )
        print(f"wrote quantum_series.csv to {args.out}")
        print(f"F_av^M(t*) = {result['peak']:.6f} at t* = {result['t_star']:.4f}")
        if result["window_exhausted"]:
            print("warning: optimum on the window boundary; widen --t-max")
        return 0

    if args.command == "attach":
        schemes = ("FM", "AFM") if args.scheme == "both" else (args.scheme,)
        for scheme in schemes:
            result = attach_series_run(scheme, args.n, dt=args.dt, t_max=args.t_max, out_dir=args.out)
            print(
                f"{scheme}: first-peak F_av = {result['peak']:.6f} at t* = {result['t_star']:.4f} "
                f"({result['convention']} convention)"
            )
        return 0

    if args.command == "table1":
        rows = table1_run(
            args.n, delta=args.delta, dt=args.dt, init=args.init,
            out_dir=args.out, jobs=args.jobs,
        )
        print(f"wrote table1.csv to {args.out}")
        print("n    FM       AFM      F_av^M")
        for r in rows:
            print(f"{r['n']:<4d} {r['fm']:.4f}   {r['afm']:.4f}   {r['favm']:.4f}")
        return 0

    if args.command == "sweep":
        if args.config:
            cfg = load_config(args.config)
            if args.out:
                cfg = replace(cfg, out_dir=args.out)
        else:
            if not args.protocol or not args.n:
                print("sweep needs --config or both --protocol and --n", file=sys.stderr)
                return 2
            cfg = SweepConfig(
                protocol=args.protocol, n_list=args.n, delta_list=args.delta,
                dt=args.dt, t_max=args.t_max, init=args.init,
                out_dir=args.out or "runs", jobs=args.jobs,
            )
        manifest = run_sweep(cfg)
        failures = [c for c in manifest.cells if c["error"]]
        print(f"sweep finished: {len(manifest.cells)} cells, {len(failures)} failed")
        for c in failures:
            print(f"  {c['cell']}: {c['error']}", file=sys.stderr)
        print(f"outputs in {cfg.out_dir}: {', '.join(sorted(manifest.outputs))}")
        return 1 if failures else 0

    if args.command == "fit":
        fit = fit_csv(args.csv, args.x, args.y)
        print(f"slope = {fit.slope:.6g}")
        print(f"intercept = {fit.intercept:.6g}")
        print(f"R^2 = {fit.r_squared:.6f}")
        print(f"max |residual| = {np.max(np.abs(fit.residuals)):.3e}")
        if args.crossing is not None:
            print(f"crossing of {args.crossing:g} at x = {fit.crossing(args.crossing):.4f}")
        return 0

    return 2


if __name__ == "__main__":
    sys.exit(main())
