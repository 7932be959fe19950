# File: Main.py
# Path: /root/pkg/Src/TorsiLimit/Cli/Main.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 20:05PM

"""CLI entry point: argparse subcommands over a pydantic-settings StudyConfig."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from TorsiLimit import __version__
from TorsiLimit.Cli.Bootstrap import SetupLogging
from TorsiLimit.Cli.Commands import (
    cmd_check,
    cmd_ifs,
    cmd_limits,
    cmd_plan,
    cmd_run_all,
    cmd_validate,
)
from TorsiLimit.Core.Settings import StudyConfig
from TorsiLimit.ErrorHandling import TorsiLimitError
from TorsiLimit.Ui.TableViews import TableViewsController

logger = logging.getLogger(__name__)

# flag dest -> StudyConfig field
OVERRIDE_FIELDS = {
    "case": "case",
    "shafts": "shafts",
    "materials": "materials",
    "out": "out",
    "beta": "beta",
    "cap_fraction": "cap_fraction",
    "delta_f_max": "delta_f_max_hz",
    "threshold_mw": "threshold_mw",
    "perturbation_mw": "perturbation_mw",
    "compute_fraction": "compute_fraction",
    "exclude_bus": "exclude_buses",
    "dt": "simulation_dt_s",
    "threads": "threads",
    "log_level": "log_level",
    "log_file": "log_file",
}


def _study_options() -> argparse.ArgumentParser:
    """Flags shared by every subcommand."""
    parser = argparse.ArgumentParser(add_help=False)
    inputs = parser.add_argument_group("inputs")
    inputs.add_argument("--config", type=Path, help="YAML study file")
    inputs.add_argument("--case", type=Path, help="Network case JSON")
    inputs.add_argument("--shafts", type=Path, help="Shaft file or directory of shaft files")
    inputs.add_argument("--materials", type=Path, help="Material file or directory")
    inputs.add_argument("--out", type=Path, help="Output directory")

    study = parser.add_argument_group("study parameters")
    study.add_argument("--cap-fraction", type=float, help="Hard cap as a fraction of MVA rating")
    study.add_argument("--delta-f-max", type=float, help="Frequency-deviation budget, Hz")
    study.add_argument("--beta", type=float, help="Relaxation step of the allocation LP")
    study.add_argument("--threshold-mw", type=float, help="Screening threshold for candidates")
    study.add_argument("--perturbation-mw", type=float, help="IF load perturbation, MW")
    study.add_argument("--compute-fraction", type=float, help="Compute cap as a share of site rating")
    study.add_argument(
        "--exclude-bus", type=int, action="append", help="Drop a site from the LP (repeatable)"
    )
    study.add_argument("--dt", type=float, help="Simulation time step, s")

    runtime = parser.add_argument_group("runtime")
    runtime.add_argument("--threads", type=int, help="Worker thread cap")
    runtime.add_argument(
        "--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], type=str.upper
    )
    runtime.add_argument("--log-file", type=Path, help="Also log to this file")
    return parser


def build_parser() -> argparse.ArgumentParser:
    common = _study_options()
    parser = argparse.ArgumentParser(
        prog="torsilimit",
        description="Subsynchronous power-fluctuation limits for data centers near turbine-generators.",
    )
    parser.add_argument("-v", "--version", action="store_true", help="Show version and exit")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    sub.add_parser("limits", parents=[common], help="Terminal fluctuation limit per generator")
    sub.add_parser("ifs", parents=[common], help="Interaction-factor matrix")
    sub.add_parser("plan", parents=[common], help="Site screening and allocation LP")

    validate = sub.add_parser("validate", parents=[common], help="Time-domain scenario check")
    validate.add_argument("scenario", type=Path, help="Scenario JSON")
    validate.add_argument("--scale", type=float, help="Scale site deviations by this factor")

    check = sub.add_parser("check", parents=[common], help="FFT compliance of a measured series")
    check.add_argument("series", type=Path, help="Measured series JSON")
    check.add_argument("--limit-mw", type=float, help="Allocation to check against")
    check.add_argument("--bus", type=int, help="Site bus; selects the allocation from plan.json")

    run_all = sub.add_parser("run-all", parents=[common], help="limits, ifs, plan (and validate)")
    run_all.add_argument("--scenario", type=Path, help="Scenario JSON to validate at the end")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        field: getattr(args, dest)
        for dest, field in OVERRIDE_FIELDS.items()
        if getattr(args, dest, None) is not None
    }


def _dispatch(args: argparse.Namespace, config: StudyConfig, tables: TableViewsController) -> int:
    if args.command == "limits":
        return cmd_limits(config, tables)
    if args.command == "ifs":
        return cmd_ifs(config, tables)
    if args.command == "plan":
        return cmd_plan(config, tables)
    if args.command == "validate":
        return cmd_validate(config, args.scenario, tables, scale=args.scale)
    if args.command == "check":
        return cmd_check(config, args.series, tables, limit_mw=args.limit_mw, bus=args.bus)
    return cmd_run_all(config, tables, scenario_path=args.scenario)


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one subcommand and return its exit code."""
    if argv is None:
        argv = sys.argv[1:]

    parser = build_parser()
    args = parser.parse_args(argv)
    if args.version:
        print(f"torsilimit {__version__}")
        return 0
    if args.command is None:
        parser.print_help(sys.stderr)
        return 2

    SetupLogging(args.log_level or "INFO")
    try:
        config = StudyConfig.load(args.config, _overrides(args))
        SetupLogging(config.log_level, config.log_file)
        logger.debug(f"Running '{args.command}' with {config.worker_count()} workers")
        return _dispatch(args, config, TableViewsController())

    except TorsiLimitError as e:
        logger.error(f"{args.command} failed: {e}")
        return e.exit_code
    except KeyboardInterrupt:
        print("\n\nStudy interrupted by user.", file=sys.stderr)
        return 1
    except Exception as e:
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        return 1
