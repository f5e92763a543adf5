"""Command-line front end.

Subcommands: ``solve`` (one mesh, one final time, CSV snapshot), ``project``
(projection only, CSV of the projected datum), ``eoc`` (convergence ladder),
``measure-rates`` (Wasserstein-1 ladder at a probe time, alpha = 0 only).
Settings come from a JSON config file (--config, keys mirroring
ExperimentConfig, unknown keys rejected) and/or flags; flags win.

Exit codes: 0 success, 2 configuration problem, 3 numeric/tolerance failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import ConfigError, NumericError
from .harness import (
    ExperimentConfig,
    config_from_dict,
    datum_for,
    run_eoc,
    run_measure_rates,
    run_solve,
    write_solution_csv,
)
from .lagrangian import to_lagrangian
from .projection import ProjectionConfig, project
from .pushforward import to_eulerian

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hsalpha",
        description=(
            "Piecewise-linear solver for alpha-dissipative Hunter-Saxton "
            "solutions: projection, evolution, convergence studies."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file (keys mirror ExperimentConfig)")
        p.add_argument("--out", help="output directory for CSV files")
        p.add_argument("--example", choices=("appendixA", "cosine", "cusp", "multipeakon"))
        p.add_argument("--alpha", type=float, help="dissipation fraction in [0, 1]")
        p.add_argument("--T", type=float, help="final (or probe) time")
        p.add_argument("--quad-tol", type=float, dest="quad_tol")
        p.add_argument("--inv-tol", type=float, dest="inv_tol")
        p.add_argument("--a", type=float, help="cusp interval left end")
        p.add_argument("--b", type=float, help="cusp interval right end")
        p.add_argument("--time-samples", type=int, dest="time_samples")
        p.add_argument(
            "--points",
            help='multipeakon nodes as JSON, e.g. "[[0, 0.5], [0.5, 0]]"',
        )

    p_solve = sub.add_parser("solve", help="run one mesh to one time, write x,u,F CSV")
    common(p_solve)
    p_solve.add_argument("--dx", type=float, required=True, help="mesh size (0, 1]")

    p_proj = sub.add_parser("project", help="project the datum only, write x,u,F CSV")
    common(p_proj)
    p_proj.add_argument("--dx", type=float, required=True, help="mesh size (0, 1]")

    p_eoc = sub.add_parser("eoc", help="convergence ladder for the wave profile")
    common(p_eoc)
    p_eoc.add_argument("--k-min", type=int, dest="k_min", help="first ladder rung")
    p_eoc.add_argument("--k-max", type=int, dest="k_max", help="last ladder rung")

    p_mr = sub.add_parser(
        "measure-rates", help="Wasserstein-1 ladder at probe time T (alpha = 0)"
    )
    common(p_mr)
    p_mr.add_argument("--k-min", type=int, dest="k_min")
    p_mr.add_argument("--k-max", type=int, dest="k_max")

    return parser


def _load_raw_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    return raw


def _build_config(args, need_T: bool = True) -> ExperimentConfig:
    d = _load_raw_config(args.config) if args.config else {}
    overlays = {
        "example": args.example,
        "alpha": args.alpha,
        "T": args.T,
        "quad_tol": args.quad_tol,
        "inv_tol": args.inv_tol,
        "a": args.a,
        "b": args.b,
        "time_samples": args.time_samples,
        "out_dir": args.out,
    }
    for key, val in overlays.items():
        if val is not None:
            d[key] = val
    if args.points is not None:
        try:
            d["points"] = json.loads(args.points)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--points is not valid JSON: {exc}") from exc
    k_min = getattr(args, "k_min", None)
    k_max = getattr(args, "k_max", None)
    if k_min is not None or k_max is not None:
        lo = k_min if k_min is not None else 1
        hi = k_max if k_max is not None else lo
        if hi < lo:
            raise ConfigError("--k-max must be at least --k-min")
        d["k_range"] = list(range(lo, hi + 1))
    if "example" not in d:
        raise ConfigError("an example must be chosen (--example or config file)")
    if "alpha" not in d:
        raise ConfigError("alpha must be given (--alpha or config file)")
    if "T" not in d:
        if need_T:
            raise ConfigError("a final time is required (--T or config file)")
        d["T"] = 1.0
    return config_from_dict(d)


def _report_lines(report):
    yield f"# {report.kind}  example={report.example}  alpha={report.alpha:g}  T={report.T:g}"
    yield f"{'k':>3} {'dx':>12} {'err':>14} {'eoc':>8}"
    for k, dx, err, eoc in report.rows:
        eoc_s = f"{eoc:8.3f}" if eoc is not None else f"{'-':>8}"
        yield f"{k:>3d} {dx:12.6g} {err:14.6e} {eoc_s}"


def _cmd_solve(args) -> int:
    cfg = _build_config(args)
    sols = run_solve(cfg, args.dx, [cfg.T])
    final = sols[-1]
    mass = final.mu.total_mass()
    print(
        f"solved example={cfg.example} alpha={cfg.alpha:g} dx={args.dx:g} "
        f"t={final.time:g}: {final.u.nodes.size} nodes, energy {mass:.12g}"
    )
    if cfg.out_dir:
        os.makedirs(cfg.out_dir, exist_ok=True)
        name = f"solution_{cfg.example}_alpha{cfg.alpha:g}_dx{args.dx:g}_t{final.time:g}.csv"
        path = os.path.join(cfg.out_dir, name)
        write_solution_csv(final, path)
        print(f"wrote {path}")
    return 0


def _cmd_project(args) -> int:
    cfg = _build_config(args, need_T=False)
    projected = project(datum_for(cfg), ProjectionConfig(dx=args.dx))
    sol = to_eulerian(to_lagrangian(projected, alpha=cfg.alpha))
    mass = sol.mu.total_mass()
    print(
        f"projected example={cfg.example} dx={args.dx:g}: "
        f"{sol.u.nodes.size} nodes, energy {mass:.12g}"
    )
    if cfg.out_dir:
        os.makedirs(cfg.out_dir, exist_ok=True)
        name = f"projected_{cfg.example}_dx{args.dx:g}.csv"
        path = os.path.join(cfg.out_dir, name)
        write_solution_csv(sol, path)
        print(f"wrote {path}")
    return 0


def _cmd_eoc(args) -> int:
    cfg = _build_config(args)
    report = run_eoc(cfg)
    for line in _report_lines(report):
        print(line)
    return 0


def _cmd_measure_rates(args) -> int:
    cfg = _build_config(args)
    report = run_measure_rates(cfg)
    for line in _report_lines(report):
        print(line)
    return 0


_COMMANDS = {
    "solve": _cmd_solve,
    "project": _cmd_project,
    "eoc": _cmd_eoc,
    "measure-rates": _cmd_measure_rates,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
