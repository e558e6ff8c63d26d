# -*- coding: utf-8 -*-
import argparse
import logging
import sys
import traceback as tb
from datetime import datetime

import config
from exceptions import PennerError

# Import routers
from routers import chi, continuum, doublescale, report, series, verify

logger = logging.getLogger("penner")

ROUTERS = [chi, series, verify, continuum, doublescale, report]

INTERNAL_ERROR_EXIT = 70


def configure_logging(level: str):
    logging.basicConfig(level=level, format=config.LOG_FORMAT, stream=sys.stderr)
    logging.getLogger().setLevel(level)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="penner",
        description="Exact generating functions, identity checks and continuum limits of the Penner matrix models.",
    )
    parser.add_argument(
        "--log-level",
        default=config.LOG_LEVEL,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="stderr log level",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    # Include all the subcommand routers
    for router in ROUTERS:
        router.register(subparsers)
    return parser


def run(argv=None) -> int:
    """Parse argv, run one subcommand and return the process exit code.

    stdout receives the complete payload or nothing; diagnostics go to stderr.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse already printed usage and the offending flag
        return int(e.code or 0)

    configure_logging(args.log_level)
    start = datetime.now()
    try:
        output, exit_code = args.handler(args)
    except PennerError as e:
        logger.debug(f"{args.command} failed: {e.detail}")
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.error(f"Unhandled error in {args.command}: {e}")
        logger.error(tb.format_exc())
        return INTERNAL_ERROR_EXIT
    finally:
        duration = (datetime.now() - start).total_seconds()
        if duration > config.SLOW_COMMAND_SECONDS:
            logger.warning(f"SLOW: {args.command} took {duration:.2f}s")

    sys.stdout.write(output if output.endswith("\n") else output + "\n")
    sys.stdout.flush()
    return exit_code


if __name__ == "__main__":
    sys.exit(run())
