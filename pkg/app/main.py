from __future__ import annotations

import asyncio
import logging
import sys
from dataclasses import replace
from typing import List, Optional, Sequence

from rich.console import Console
from rich.logging import RichHandler

from .config import LOG_LEVELS, Settings, load_settings
from .handlers import build_parser, router
from .services.reports import ReportService, write_report

LOG_FORMAT = "%(message)s"
EXIT_ERROR = 2


def _apply_overrides(settings: Settings, args) -> Settings:
    if args.field:
        settings = replace(settings, default_field=args.field.strip().lower())
    if args.seed is not None:
        settings = replace(settings, search=replace(settings.search, seed=args.seed))
    if args.max_stage is not None:
        if args.max_stage < 0:
            raise ValueError("--max-stage must be non-negative")
        settings = replace(settings, max_stage=args.max_stage)
    if args.report:
        settings = replace(settings, report_path=args.report)
    if args.timings:
        settings = replace(settings, record_timings=True)
    if args.log_level:
        level = args.log_level.strip().upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"--log-level must be one of {sorted(LOG_LEVELS)}")
        settings = replace(settings, log_level=level)
    return settings


async def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    logging.basicConfig(
        level=logging.INFO,
        format=LOG_FORMAT,
        datefmt="%H:%M:%S",
        handlers=[RichHandler(rich_tracebacks=True, markup=True, console=Console(stderr=True))],
    )
    logger = logging.getLogger(__name__)
    args = build_parser().parse_args(argv)

    try:
        settings = _apply_overrides(load_settings(), args)
    except (RuntimeError, ValueError) as exc:
        logger.error("configuration error: %s", exc)
        return EXIT_ERROR
    logging.getLogger().setLevel(settings.log_level)

    console = Console(stderr=True)
    try:
        result = await router.dispatch(args.command, args=args, settings=settings, console=console)
    except (ValueError, RuntimeError, OSError) as exc:
        logger.error("%s failed: %s", args.command, exc)
        return EXIT_ERROR

    report = ReportService.envelope(args.command, _echo(argv), result.verdict, result.exit_code, result.payload)
    write_report(report, settings.report_path)
    return result.exit_code


def _echo(argv: List[str]) -> List[str]:
    # The report path is not part of the computation.
    out, skip = [], False
    for token in argv:
        if skip:
            skip = False
            continue
        if token == "--report":
            skip = True
            continue
        if token.startswith("--report="):
            continue
        out.append(token)
    return out


def main() -> None:
    sys.exit(asyncio.run(run_cli()))


if __name__ == "__main__":
    main()
