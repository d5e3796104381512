"""Command-line interface.

Subcommands::

    motorld validate <graph.json>                 structural checks, JSON report
    motorld minimality <graph.json>               gate-path census, JSON report
    motorld summary <law.json>                    velocity, critical tilt, domains
    motorld rate-curve <law.json> --kind I ...    CSV curve (+ PNG figure)
    motorld gc-check <law.json>                   fluctuation-symmetry report
    motorld simulate <law.json> --n/--t --seed    raw cycles or a trajectory
    motorld mc-verify <law.json> --t --n --seed   empirical curve vs analytic

Reports go to standard output as JSON; tables and figures are written under
``--out-dir`` (default: the ``MOTORLD_OUT`` environment variable, else the
working directory).  Exit status is 0 on success, 1 when inputs fail
validation, 2 when a numerical routine fails; error details are emitted as a
JSON object on standard error.  All sampling is driven by an explicit
``--seed``, and every file embeds the configuration that produced it.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._serialize import dump_json, jsonable, write_csv
from .errors import MotorldError, NumericalError, SpecificationError
from .gc import gc_check_analytic, gc_predict
from .graph import load_graph, minimality_report, validate
from .laws import GraphLaw, law_to_dict, load_law
from .mc import compare_curves, empirical_rate_position
from .ratefn import qualitative_summary, rate_curve
from .renewal import mgf_summary
from .simulate import sample_cycles, simulate_trajectory, spawn_rngs

__all__ = ["main", "build_parser"]


class _Parser(argparse.ArgumentParser):
    """Argument errors are input validation failures, not usage crashes."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise SpecificationError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="motorld", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"motorld {__version__}")
    parser.add_argument(
        "--out-dir",
        default=None,
        help="directory for generated files (default: $MOTORLD_OUT or the cwd)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a cell graph file")
    p.add_argument("graph_file")

    p = sub.add_parser("minimality", help="count gate paths and check edge symmetry")
    p.add_argument("graph_file")

    p = sub.add_parser("summary", help="velocity, critical tilt, domain endpoints")
    p.add_argument("law_file")

    p = sub.add_parser("rate-curve", help="tabulate a rate function on a grid")
    p.add_argument("law_file")
    p.add_argument("--kind", choices=["I", "J+", "J-"], default="I")
    p.add_argument("--route", choices=["renewal", "spectral", "both"], default="renewal")
    p.add_argument("--grid", required=True, help="start:stop:step, stop inclusive")
    p.add_argument("--out", default=None, help="CSV filename (default rate_curve.csv)")
    p.add_argument("--no-plot", action="store_true", help="skip the PNG figure")

    p = sub.add_parser("gc-check", help="fluctuation-symmetry report")
    p.add_argument("law_file")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--grid-size", type=int, default=64)

    p = sub.add_parser("simulate", help="sample cycles (--n) or one trajectory (--t)")
    p.add_argument("law_file")
    p.add_argument("--n", type=int, default=None, help="number of cycles to sample")
    p.add_argument("--t", type=float, default=None, help="trajectory horizon (graph laws)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=None, help="CSV filename")

    p = sub.add_parser("mc-verify", help="empirical position rate curve vs analytic")
    p.add_argument("law_file")
    p.add_argument("--t", type=float, required=True, help="horizon of each walk")
    p.add_argument("--n", type=int, required=True, help="number of walks")
    p.add_argument("--bins", type=float, default=None, help="bin width (default 2/t)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None, help="CSV filename for the empirical curve")
    p.add_argument("--no-plot", action="store_true", help="skip the PNG figure")
    return parser


def _out_dir(args: argparse.Namespace) -> Path:
    d = args.out_dir or os.environ.get("MOTORLD_OUT") or "."
    path = Path(d)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _parse_grid(text: str) -> np.ndarray:
    try:
        a, b, step = (float(x) for x in text.split(":"))
    except ValueError as exc:
        raise SpecificationError(f"grid must be start:stop:step, got {text!r}") from exc
    if step <= 0.0 or b < a:
        raise SpecificationError(f"grid needs stop >= start and step > 0, got {text!r}")
    count = int(math.floor((b - a) / step + 1e-9)) + 1
    return a + step * np.arange(count)


def _emit(payload: dict) -> None:
    print(json.dumps(jsonable(payload), indent=2))


def _cmd_validate(args: argparse.Namespace) -> int:
    graph, rates = load_graph(args.graph_file)
    report = validate(graph, rates)
    _emit({"config": {"graph_file": args.graph_file}, **dataclasses.asdict(report)})
    return 0 if report.valid else 1


def _cmd_minimality(args: argparse.Namespace) -> int:
    graph, _ = load_graph(args.graph_file)
    report = minimality_report(graph)
    _emit({"config": {"graph_file": args.graph_file}, **dataclasses.asdict(report)})
    return 0


def _cmd_summary(args: argparse.Namespace) -> int:
    law = load_law(args.law_file)
    qual = qualitative_summary(law)
    mgf = mgf_summary(law)
    _emit(
        {
            "config": {"law_file": args.law_file},
            "velocity": qual.velocity,
            "lambda_c": qual.lambda_c,
            "qualitative": dataclasses.asdict(qual),
            "mgf": dataclasses.asdict(mgf),
        }
    )
    return 0


def _cmd_rate_curve(args: argparse.Namespace) -> int:
    law = load_law(args.law_file)
    grid = _parse_grid(args.grid)
    cfg = {
        "law_file": args.law_file,
        "law": law_to_dict(law),
        "kind": args.kind,
        "route": args.route,
        "grid": args.grid,
        "seed": None,
    }
    out = _out_dir(args) / (args.out or "rate_curve.csv")
    routes = ["renewal", "spectral"] if args.route == "both" else [args.route]
    curves = [rate_curve(law, args.kind, grid, route=r) for r in routes]
    result: dict = {"config": cfg, "csv": str(out)}
    if len(curves) == 2:
        a, b = curves[0].values, curves[1].values
        both = np.isfinite(a) & np.isfinite(b)
        gap = float(np.abs(a[both] - b[both]).max()) if both.any() else 0.0
        result["max_gap"] = gap
        header = ["abscissa", "value_renewal", "value_spectral",
                  "is_infinite_renewal", "is_infinite_spectral"]
        rows = [
            [x, va, vb, not math.isfinite(va), not math.isfinite(vb)]
            for x, va, vb in zip(grid, a, b)
        ]
    else:
        header = ["abscissa", "value", "is_infinite"]
        rows = [
            [x, v, not math.isfinite(v)]
            for x, v in zip(grid, curves[0].values)
        ]
    write_csv(out, header, rows, config=cfg)
    if not args.no_plot:
        from .plotting import plot_rate_curve

        png = out.with_suffix(".png")
        plot_rate_curve(curves, png)
        result["png"] = str(png)
    _emit(result)
    return 0


def _cmd_gc_check(args: argparse.Namespace) -> int:
    law = load_law(args.law_file)
    report = gc_check_analytic(law, lambda_grid_size=args.grid_size, tol=args.tol)
    payload = {
        "config": {"law_file": args.law_file, "tol": args.tol, "grid_size": args.grid_size},
        **dataclasses.asdict(report),
    }
    if isinstance(law, GraphLaw):
        verdict, delta = gc_predict(law.graph, law.rate_map)
        payload["prediction"] = {"verdict": verdict, "delta": delta}
    _emit(payload)
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    law = load_law(args.law_file)
    if (args.n is None) == (args.t is None):
        raise SpecificationError("pass exactly one of --n (cycles) or --t (trajectory)")
    out_dir = _out_dir(args)
    if args.n is not None:
        cfg = {"law_file": args.law_file, "law": law_to_dict(law),
               "n": args.n, "seed": args.seed}
        if args.n < 1:
            raise SpecificationError("--n must be positive")
        rng = spawn_rngs(args.seed, 1)[0]
        signs, durs = sample_cycles(law, args.n, rng)
        out = out_dir / (args.out or "cycles.csv")
        write_csv(out, ["sign", "duration"],
                  [[int(s), float(d)] for s, d in zip(signs, durs)], config=cfg)
        _emit({"config": cfg, "csv": str(out), "n": args.n,
               "mean_sign": float(np.mean(signs)), "mean_duration": float(np.mean(durs))})
        return 0
    if not isinstance(law, GraphLaw):
        raise SpecificationError("--t trajectories require a graph law")
    if args.t <= 0.0:
        raise SpecificationError("--t must be positive")
    cfg = {"law_file": args.law_file, "law": law_to_dict(law),
           "t": args.t, "seed": args.seed}
    rng = spawn_rngs(args.seed, 1)[0]
    traj = simulate_trajectory(law.graph, law.rate_map, args.t, rng)
    out = out_dir / (args.out or "trajectory.csv")
    write_csv(out, ["time", "cell", "vertex"],
              [[t, v.cell, v.name] for t, v in zip(traj.times, traj.vertices)],
              config=cfg)
    _emit({"config": cfg, "csv": str(out), "jumps": len(traj.times) - 1,
           "final_cell": traj.vertices[-1].cell})
    return 0


def _cmd_mc_verify(args: argparse.Namespace) -> int:
    law = load_law(args.law_file)
    cfg = {
        "law_file": args.law_file,
        "law": law_to_dict(law),
        "t": args.t,
        "n": args.n,
        "bins": args.bins,
        "seed": args.seed,
        "workers": args.workers,
    }
    emp = empirical_rate_position(
        law, args.t, args.n, bin_width=args.bins, seed=args.seed, workers=args.workers
    )
    lo, hi = float(emp.abscissae.min()), float(emp.abscissae.max())
    pad = max(emp.bin_width, 0.05 * (hi - lo))
    grid = np.linspace(lo - pad, hi + pad, 201)
    analytic = rate_curve(law, "I", grid)
    report = compare_curves(analytic, emp)
    out_dir = _out_dir(args)
    out = out_dir / (args.out or "empirical_curve.csv")
    write_csv(
        out,
        ["abscissa", "estimate", "lower", "upper", "count"],
        [
            [x, e, l, u, int(k)]
            for x, e, l, u, k in zip(emp.abscissae, emp.estimates, emp.lower,
                                     emp.upper, emp.counts)
        ],
        config=cfg,
    )
    report_path = out_dir / (out.stem + "_comparison.json")
    payload = {
        "config": cfg,
        "coverage": report.coverage,
        "n_bins": report.n_bins,
        "n_covered": report.n_covered,
        "max_gap_covered": report.max_gap_covered,
        "empirical_offset": report.empirical_offset,
        "analytic_offset": report.analytic_offset,
        "align": report.align,
        "csv": str(out),
    }
    dump_json(payload, report_path)
    payload["comparison_json"] = str(report_path)
    if not args.no_plot:
        from .plotting import plot_mc_comparison

        png = out.with_suffix(".png")
        plot_mc_comparison(analytic, emp, report, png)
        payload["png"] = str(png)
    _emit(payload)
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "minimality": _cmd_minimality,
    "summary": _cmd_summary,
    "rate-curve": _cmd_rate_curve,
    "gc-check": _cmd_gc_check,
    "simulate": _cmd_simulate,
    "mc-verify": _cmd_mc_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except SpecificationError as exc:
        _error(exc)
        return 1
    except NumericalError as exc:
        _error(exc)
        return 2
    except MotorldError as exc:  # pragma: no cover - safety net
        _error(exc)
        return 2
    except OSError as exc:
        _error(SpecificationError(str(exc)))
        return 1


def _error(exc: MotorldError) -> None:
    doc = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    print(json.dumps(doc), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
