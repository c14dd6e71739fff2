"""Command-line entry point: ``iqdyn evolve|sweep|figure|validate``.

Exit codes: 0 success, 1 validation failure, 2 bad input.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import IQDynError
from .pipeline import FIGURES, SWEEP_GRID, RunConfig, run_evolve, run_figure, run_sweep, run_validate

EXIT_OK, EXIT_VALIDATION, EXIT_BAD_INPUT = 0, 1, 2


def load_config(path) -> dict:
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def _theta(value) -> float:
    """Radians, or a string such as ``"pi"``, ``"pi/2"``, ``"0.5*pi"``."""
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip().lower().replace(" ", "")
    num = text.replace("*pi", "").replace("pi", "1") if "pi" in text else text
    if "/" in num:
        a, b = num.split("/")
        val = float(a or 1) / float(b)
    else:
        val = float(num)
    return val * math.pi if "pi" in text else val


def _normalize_theta(data: dict) -> dict:
    if "theta" in data:
        data = {**data, "theta": _theta(data["theta"])}
    return data


def cmd_evolve(args) -> int:
    data = _normalize_theta(load_config(args.config))
    if args.out:
        data["output_path"] = args.out
    config = RunConfig.from_mapping(data)
    if not config.output_path:
        config.output_path = str(Path(args.config).with_suffix(".csv"))
    record = run_evolve(config)
    print(f"wrote {len(record.t)} rows to {config.output_path}")
    return EXIT_OK


def _sweep_grid(data: dict):
    grid = data.pop("grid", None)
    points = data.pop("points", None)
    if grid is not None and points is not None:
        raise ValueError("give either grid or points, not both")
    if points is not None:
        return tuple(np.round(np.linspace(0, 1, int(points)), 12))
    return tuple(float(x) for x in grid) if grid is not None else SWEEP_GRID


def cmd_sweep(args) -> int:
    data = _normalize_theta(load_config(args.config))
    channel = data.pop("channel")
    statistics = data.pop("statistics", "fermion")
    theta = float(data.pop("theta", 0.0))
    t = data.pop("t", "stationary")
    grid = _sweep_grid(data)
    out = args.out or data.pop("output_path", None) or data.pop("output", None)
    data.pop("output_path", None)
    data.pop("output", None)
    if data:
        raise ValueError(f"unknown sweep keys: {sorted(data)}")
    table = run_sweep(channel, statistics, theta, grid, t)
    path = out or str(Path(args.config).with_suffix(".csv"))
    table.to_csv(path)
    print(f"wrote {len(table.rows)} rows to {path}")
    return EXIT_OK


def cmd_figure(args) -> int:
    for path in run_figure(args.id, args.out):
        print(path)
    return EXIT_OK


def cmd_validate(args) -> int:
    report = run_validate(args.seed, args.cases, channel=args.channel,
                          indistinguishability_target=args.indistinguishability,
                          initial_state=args.initial_state)
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iqdyn",
        description="Open-system dynamics of two spatially indistinguishable qubits.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="single trajectory from a TOML config")
    p.add_argument("config")
    p.add_argument("--out", help="CSV path (overrides output_path)")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("sweep", help="concurrence and P_LR versus indistinguishability")
    p.add_argument("config")
    p.add_argument("--out", help="CSV path (overrides output_path)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", help="CSV data behind one figure")
    p.add_argument("id", help=f"one of {', '.join(FIGURES)}")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("validate", help="closed forms vs the numerical Lindblad oracle")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=10)
    p.add_argument("--channel", help="force a channel")
    p.add_argument("--indistinguishability", type=float, help="force I on the l = r' branch")
    p.add_argument("--initial-state", help="force an initial basis label")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_BAD_INPUT
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (IQDynError, ValueError, KeyError, TypeError, OSError, tomllib.TOMLDecodeError) as exc:
        msg = f"missing key {exc}" if isinstance(exc, KeyError) else str(exc)
        print(f"iqdyn: error: {msg}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
