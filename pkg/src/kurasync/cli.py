"""Command-line interface.

Subcommands:
    bounds      critical-coupling estimates for a frequency vector
    simulate    integrate a configured network and export the trajectory
    study       averaged threshold comparison over seeded random draws
    equilibria  equilibrium location and linear stability report

Each report is written as delimited text (CSV, plus JSON where noted) with
a matplotlib PNG rendered alongside unless ``--no-figures`` is given. Exit
codes: 0 success, 2 configuration error, 3 numerical failure. No
environment variables are required.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import bound_report
from .config import (
    atomic_write_json,
    atomic_write_text,
    format_float,
    load_json,
    meta_lines,
    output_metadata,
    parse_equilibria_config,
    parse_simulate_config,
    parse_study_config,
)
from .errors import ConfigError, KurasyncError, NumericalFailure
from .experiments import run_scenario, run_study
from .stability import analyze_equilibrium, conjugacy_check, multirate_sync_report

_BOUND_COLUMNS = ("k_necessary", "k_exact", "k_explicit", "k_continuum", "k_ermentrout", "u_star")


def _parse_omega(text: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"--omega must be a comma-separated list of numbers: {exc}") from exc
    if len(values) < 2:
        raise ConfigError("--omega needs at least two frequencies")
    return values


def _read_density(path: str) -> np.ndarray:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read density file {path}: {exc}") from exc
    try:
        values = [float(token) for token in text.replace(",", " ").split()]
    except ValueError as exc:
        raise ConfigError(f"density file {path} must hold numbers only: {exc}") from exc
    if not values:
        raise ConfigError(f"density file {path} is empty")
    return np.asarray(values)


def _figure_path(out: Path) -> Path:
    return out.with_suffix(".png")


def cmd_bounds(args) -> int:
    omega = _parse_omega(args.omega)
    density = _read_density(args.ermentrout) if args.ermentrout else None
    try:
        report = bound_report(
            omega,
            exact=args.exact,
            g_at_zero=args.continuum,
            density=density,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    payload = report.as_dict()
    resolved = {"omega": omega, "exact": args.exact, "continuum": args.continuum,
                "ermentrout": args.ermentrout}
    meta = output_metadata(resolved, seed="none")
    if args.out is None:
        print(json.dumps({"meta": meta, "bounds": payload}, indent=2, sort_keys=True))
        return 0
    out = Path(args.out)
    atomic_write_json(out.with_suffix(".json"), {"meta": meta, "bounds": payload})
    lines = meta_lines(meta)
    lines.append(",".join(_BOUND_COLUMNS))
    lines.append(",".join(
        "" if payload[col] is None else format_float(payload[col]) for col in _BOUND_COLUMNS
    ))
    atomic_write_text(out.with_suffix(".csv"), "\n".join(lines) + "\n")
    if not args.no_figures:
        from .figures import render_bounds_figure
        render_bounds_figure(payload, _figure_path(out))
    print(f"wrote {out.with_suffix('.json')} and {out.with_suffix('.csv')}")
    return 0


def cmd_simulate(args) -> int:
    cfg = parse_simulate_config(load_json(args.config))
    result = run_scenario(cfg.spec, cfg.state0, cfg.t_final, cfg.step)
    meta = output_metadata(cfg.resolved, cfg.seed)
    meta["resolved_config"] = json.dumps(cfg.resolved, sort_keys=True)
    out = Path(args.out)
    result.trajectory.to_csv(out, meta=meta)
    summary_path = Path(args.summary) if args.summary else out.with_suffix(".summary.json")
    atomic_write_json(summary_path, {"meta": meta, "summary": result.summary})
    if not args.no_figures:
        from .figures import render_trajectory_figure
        render_trajectory_figure(result.trajectory, result.summary, _figure_path(out))
    print(f"wrote {out} and {summary_path}")
    return 0


def cmd_study(args) -> int:
    cfg = parse_study_config(load_json(args.config))
    rows = run_study(cfg.n_grid, cfg.trials, cfg.interval, cfg.seed)
    meta = output_metadata(cfg.resolved, cfg.seed)
    lines = meta_lines(meta)
    lines.append("n,k_necessary,k_exact,k_explicit,trials,seed")
    for row in rows:
        lines.append(",".join([
            str(row.n),
            format_float(row.k_necessary),
            format_float(row.k_exact),
            format_float(row.k_explicit),
            str(row.trials),
            str(row.seed),
        ]))
    out = Path(args.out)
    atomic_write_text(out, "\n".join(lines) + "\n")
    if not args.no_figures:
        from .figures import render_study_figure
        render_study_figure(rows, _figure_path(out))
    print(f"wrote {out}")
    return 0


def cmd_equilibria(args) -> int:
    cfg = parse_equilibria_config(load_json(args.config))
    report = analyze_equilibrium(cfg.spec)
    payload = report.as_dict()
    payload["sync"] = multirate_sync_report(cfg.spec, cfg.theta0).as_dict()
    conjugacy = conjugacy_check(cfg.spec, m_scalings=cfg.m_scalings, lambdas=cfg.lambdas)
    payload["conjugacy"] = {
        "lambda_grid": list(cfg.lambdas),
        "inertia_scalings": list(cfg.m_scalings) if cfg.spec.dd.m else [],
        "inertia_invariant": conjugacy.inertia_invariant,
        "reference_inertia": list(conjugacy.reference_inertia),
        "max_transfer_residual": conjugacy.max_transfer_residual,
        "min_center_alignment": conjugacy.min_center_alignment,
        "stable": conjugacy.stable,
    }
    meta = output_metadata(cfg.resolved, cfg.seed)
    out = Path(args.out)
    atomic_write_json(out, {"meta": meta, "report": payload})
    if not args.no_figures:
        from .figures import render_equilibria_figure
        render_equilibria_figure(payload, _figure_path(out))
    print(f"wrote {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kurasync",
        description="Coupled-oscillator synchronization toolkit",
    )
    parser.add_argument("--version", action="version", version=f"kurasync {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_bounds = sub.add_parser("bounds", help="critical-coupling estimates for a frequency vector")
    p_bounds.add_argument("--omega", required=True,
                          help="comma-separated natural frequencies, e.g. '0,0.5,1'")
    p_bounds.add_argument("--exact", action="store_true",
                          help="also solve the implicit exact threshold")
    p_bounds.add_argument("--continuum", type=float, default=None, metavar="G0",
                          help="density value at 0 for the infinite-population onset bound")
    p_bounds.add_argument("--ermentrout", default=None, metavar="DENSITY.CSV",
                          help="tabulated symmetric density on [-1,1] (uniform grid, odd count)")
    p_bounds.add_argument("--out", default=None, help="output path stem (.json/.csv/.png)")
    p_bounds.add_argument("--no-figures", action="store_true")
    p_bounds.set_defaults(handler=cmd_bounds)

    p_sim = sub.add_parser("simulate", help="integrate a configured network")
    p_sim.add_argument("--config", required=True, help="run configuration JSON")
    p_sim.add_argument("--out", required=True, help="trajectory CSV path")
    p_sim.add_argument("--summary", default=None, help="summary JSON path (default: <out>.summary.json)")
    p_sim.add_argument("--no-figures", action="store_true")
    p_sim.set_defaults(handler=cmd_simulate)

    p_study = sub.add_parser("study", help="averaged threshold comparison over random draws")
    p_study.add_argument("--config", required=True, help="study configuration JSON")
    p_study.add_argument("--out", required=True, help="study CSV path")
    p_study.add_argument("--no-figures", action="store_true")
    p_study.set_defaults(handler=cmd_study)

    p_eq = sub.add_parser("equilibria", help="equilibrium and stability report")
    p_eq.add_argument("--config", required=True, help="network configuration JSON")
    p_eq.add_argument("--out", required=True, help="report JSON path")
    p_eq.add_argument("--no-figures", action="store_true")
    p_eq.set_defaults(handler=cmd_equilibria)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except KurasyncError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
