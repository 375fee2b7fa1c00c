"""Command-line front end.

Subcommands::

    spacing          orthogonal inter-satellite spacing for one elevation
                     or an elevation grid (CSV on stdout)
    sweep-ds         rate sweep over the inter-satellite distance
    sweep-power      rate sweep over the total transmit power
    pass             rate profile over the mean elevation (one pass)
    validate-config  parse and validate a scenario file

Exit codes: 0 success, 1 configuration/validation error, 2 no feasible
spacing, 3 numerical failure during a sweep.
"""

from __future__ import annotations

import argparse
import sys

from .errors import InvalidConfig, NoConvergence, NoRoot, NumericalError, SwarmLinkError
from .geometry import OrbitConfig
from .scenario import (
    AXIS_INTER_SAT_DISTANCE,
    AXIS_MEAN_ELEVATION,
    AXIS_TRANSMIT_POWER,
    config_digest,
    load_scenario,
)
from .sim import run_sweep, write_results
from .spacing import SpacingQuery, optimal_spacing
from .units import deg_to_rad, km_to_m, m_to_km

_EXIT_OK = 0
_EXIT_CONFIG = 1
_EXIT_NO_ROOT = 2
_EXIT_NUMERICAL = 3

_SWEEP_AXES = {
    "sweep-ds": AXIS_INTER_SAT_DISTANCE,
    "sweep-power": AXIS_TRANSMIT_POWER,
    "pass": AXIS_MEAN_ELEVATION,
}


def _add_sweep_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="scenario TOML file")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a scenario key (dotted path), repeatable",
    )
    parser.add_argument("--out", default="results", help="output directory")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--seed", type=int, help="override the master seed")
    parser.add_argument("--trials", type=int, help="override the trial count")
    parser.add_argument("--workers", type=int, default=1, help="parallel worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swarmlink",
        description="Link-level simulator for cooperative LEO swarm downlink",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    spacing = sub.add_parser(
        "spacing", help="solve the orthogonal inter-satellite spacing"
    )
    spacing.add_argument("--theta-deg", type=float, help="single elevation angle")
    spacing.add_argument(
        "--theta-grid",
        nargs=3,
        type=float,
        metavar=("START", "STOP", "STEP"),
        help="elevation grid in degrees",
    )
    spacing.add_argument("--nr", type=int, default=100, help="receive antennas")
    spacing.add_argument("--d0-km", type=float, default=600.0, help="orbit altitude")
    spacing.add_argument("--k", type=int, default=1, help="orthogonality harmonic")

    for name in ("sweep-ds", "sweep-power", "pass"):
        cmd = sub.add_parser(name, help=f"run the {name} experiment")
        _add_sweep_arguments(cmd)

    validate = sub.add_parser("validate-config", help="check a scenario file")
    validate.add_argument("--config", required=True)
    validate.add_argument(
        "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE"
    )
    return parser


def _spacing_thetas(args) -> list[float]:
    if (args.theta_deg is None) == (args.theta_grid is None):
        raise InvalidConfig("give exactly one of --theta-deg or --theta-grid")
    if args.theta_deg is not None:
        return [args.theta_deg]
    start, stop, step = args.theta_grid
    if step <= 0.0 or stop < start:
        raise InvalidConfig("grid must have positive step and stop >= start")
    count = int(round((stop - start) / step)) + 1
    return [start + i * step for i in range(count)]


def cmd_spacing(args) -> int:
    thetas = _spacing_thetas(args)
    orbit = OrbitConfig(altitude_m=km_to_m(args.d0_km))
    print("theta_deg,ds_orth_km")
    for theta_deg in thetas:
        query = SpacingQuery(
            elevation_rad=deg_to_rad(theta_deg),
            num_rx=args.nr,
            orbit=orbit,
            harmonic=args.k,
        )
        try:
            result = optimal_spacing(query)
        except NoRoot as exc:
            print(
                f"error: no orthogonal spacing at theta={theta_deg} deg: {exc}",
                file=sys.stderr,
            )
            return _EXIT_NO_ROOT
        print(f"{theta_deg},{m_to_km(result.spacing_m)}")
    return _EXIT_OK


def _apply_flag_overrides(args) -> list[str]:
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    if args.trials is not None:
        overrides.append(f"trials={args.trials}")
    return overrides


def cmd_sweep(args, command: str) -> int:
    config = load_scenario(args.config, _apply_flag_overrides(args))
    expected_axis = _SWEEP_AXES[command]
    if config.sweep.axis != expected_axis:
        raise InvalidConfig(
            f"{command} needs sweep.axis = {expected_axis!r}, "
            f"but the scenario declares {config.sweep.axis!r}"
        )
    records = run_sweep(config, workers=args.workers)
    digest = config_digest(config)
    basename = f"{command.replace('-', '_')}_{digest}"
    path = write_results(records, args.out, basename, args.format)

    r_opt = [rec.mean.r_opt for rec in records]
    r_lin = [rec.mean.r_lin_geo for rec in records]
    print(f"wrote {path}")
    print(f"points: {len(records)}  trials/point: {records[0].num_trials}")
    print(
        f"r_opt bit/s/Hz: min {min(r_opt):.4f}  max {max(r_opt):.4f}  "
        f"mean {sum(r_opt) / len(r_opt):.4f}"
    )
    print(
        f"r_lin_geo bit/s/Hz: min {min(r_lin):.4f}  max {max(r_lin):.4f}  "
        f"mean {sum(r_lin) / len(r_lin):.4f}"
    )
    return _EXIT_OK


def cmd_validate(args) -> int:
    config = load_scenario(args.config, list(args.overrides))
    print(f"ok: {args.config} (digest {config_digest(config)})")
    return _EXIT_OK


def main(argv: "list[str] | None" = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "spacing":
            return cmd_spacing(args)
        if args.command in _SWEEP_AXES:
            return cmd_sweep(args, args.command)
        if args.command == "validate-config":
            return cmd_validate(args)
        raise InvalidConfig(f"unknown command {args.command!r}")
    except InvalidConfig as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    except NoRoot as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_NO_ROOT
    except (NumericalError, NoConvergence, SwarmLinkError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
