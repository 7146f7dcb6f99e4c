from __future__ import annotations

import argparse
import logging
import time
from pathlib import Path
from typing import Optional, Sequence

from .commands import CommandContext, analysis, sets, topology
from .commands.report import RunReport
from .config import FORMATS, FSKitConfig
from .services.core_fuzzy import FuzzySoftError
from .services.ingestion import DataDirectoryIngestor

LOGGER = logging.getLogger(__name__)

GLOBAL_FLAGS = ("seed", "grid", "tol", "format", "log_level")


def _common_parser() -> argparse.ArgumentParser:
    """Global flags, accepted before or after the subcommand."""

    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, help="RNG seed (default: FSKIT_SEED)")
    common.add_argument("--grid", type=int, help="number of alpha levels (default: FSKIT_GRID)")
    common.add_argument("--tol", type=float, help="stopping tolerance (default: FSKIT_TOL)")
    common.add_argument("--format", choices=FORMATS, help="report format (default: FSKIT_FORMAT)")
    common.add_argument("--log-level", help="logging level (default: FSKIT_LOG_LEVEL)")
    return common


def create_parser() -> argparse.ArgumentParser:
    """Parser factory used by both ``python -m fskit`` and tests."""

    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="fskit",
        description="Fuzzy soft set calculus: set algebra, fuzzy reals, norms, topologies and fixed points.",
        parents=[common],
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    sets.register(subparsers, common)
    analysis.register(subparsers, common)
    topology.register(subparsers, common)
    return parser


def _log_level(args: argparse.Namespace, config: FSKitConfig) -> int:
    name = (getattr(args, "log_level", None) or config.log_level).upper()
    level = logging.getLevelName(name)
    return level if isinstance(level, int) else logging.WARNING


def _configure(args: argparse.Namespace, config: FSKitConfig) -> FSKitConfig:
    if getattr(args, "grid", None) is not None and args.grid < 2:
        raise FuzzySoftError(f"--grid needs at least two levels, got {args.grid}")
    return config.with_overrides(
        seed=getattr(args, "seed", None),
        grid_levels=getattr(args, "grid", None),
        tol=getattr(args, "tol", None),
        output_format=getattr(args, "format", None),
    )


def _command_name(args: argparse.Namespace) -> str:
    action = getattr(args, "action", None)
    return f"{args.command} {action}" if action else args.command


def main(argv: Optional[Sequence[str]] = None, *, base_path: Optional[Path] = None) -> int:
    args = create_parser().parse_args(argv)
    resolved_base = base_path or Path.cwd()
    config = FSKitConfig.from_env(resolved_base)
    logging.basicConfig(level=_log_level(args, config), format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    started = time.perf_counter()
    output_format = getattr(args, "format", None) or config.output_format
    try:
        config = _configure(args, config)
        ctx = CommandContext(config=config, ingestor=DataDirectoryIngestor(resolved_base))
        LOGGER.info("Running %s with %s", _command_name(args), config.summary())
        report: RunReport = args.handler(args, ctx)
    except FuzzySoftError as exc:
        LOGGER.info("%s failed: %s", _command_name(args), exc)
        report = RunReport(command=_command_name(args), seed=config.seed).fail(exc)
    report.timing_seconds = time.perf_counter() - started
    print(report.render(output_format))
    LOGGER.info("Finished %s: ok=%s", report.command, report.ok)
    return report.exit_code


__all__ = ["create_parser", "main"]
