"""Argument parsing and logging for the `mlc` executable.

Warning: Logger usage in this file

    Records are only emitted after `_configure_logger` runs inside `setup`.
"""

import logging
import sys
from argparse import ArgumentParser, Namespace, RawDescriptionHelpFormatter
from typing import List, Optional

from .commands import get_command_classes

EPILOG = """exit codes:
  0  success
  2  malformed arguments or input document
  3  mathematical failure (inconsistent datum, unreachable budget, ...)
  4  a file could not be read or written
"""


def setup(argv: Optional[List[str]] = None) -> Namespace:
    """Parses `argv` and configures logging at the requested level.

    Args:
        argv (Optional[List[str]]): The CLI arguments, `sys.argv[1:]` if `None`.

    Returns:
        A[n] `Namespace` whose `init` is the selected `Command` subclass.
    """
    parser = _configure_argument_parser()
    args = parser.parse_args(argv)
    _configure_logger(args.log_level)

    logger = logging.getLogger(__name__)
    logger.debug(f"parsed CLI arguments: {args}")
    logger.info(f"running {args.init.name} with settings overrides {args.set}")

    return args


def _configure_argument_parser() -> ArgumentParser:
    """Builds the `mlc` parser: log level flags, then one subparser per command.

    Returns:
        A[n] `ArgumentParser` with a required subcommand.
    """
    parser = ArgumentParser(
        prog="mlc",
        description="Čech cohomology and Mittag-Leffler constructions.",
        epilog=EPILOG,
        formatter_class=RawDescriptionHelpFormatter,
    )

    _configure_logger_args(parser)

    cmd_subparsers = parser.add_subparsers(
        title="command",
        required=True,
        metavar="COMMAND",
        description="Every command writes one JSON or CSV report.",
    )
    for cmd_cls in get_command_classes():
        cmd_cls.configure_args(cmd_subparsers)

    return parser


def _configure_logger_args(parser: ArgumentParser) -> None:
    """Adds the mutually exclusive -d/--debug, -v/--verbose and -q/--quiet flags.

    Args:
        parser (ArgumentParser): The argument parser to update.
    """
    group_log = parser.add_argument_group(
        "logging",
        description="Log records go to stderr; the default level is WARNING.",
    )
    group_log_lvl = group_log.add_mutually_exclusive_group()
    group_log_lvl.add_argument(
        "-d",
        "--debug",
        help="log matrix ranks, pole-push steps and truncation windows",
        action="store_const",
        dest="log_level",
        const=logging.DEBUG,
        default=logging.WARNING,
    )
    group_log_lvl.add_argument(
        "-v",
        "--verbose",
        help="log the progress of each construction",
        action="store_const",
        dest="log_level",
        const=logging.INFO,
    )
    group_log_lvl.add_argument(
        "-q",
        "--quiet",
        help="only log errors",
        action="store_const",
        dest="log_level",
        const=logging.ERROR,
    )


def _configure_logger(level: int) -> None:
    """Replaces any existing root handler with one writing to stderr at `level`.

    Floating-point RuntimeWarnings from numpy are routed through the logger.

    Args:
        level (int): A `logging` level.
    """
    logging.basicConfig(
        level=level,
        format="%(levelname)s - %(name)s:%(lineno)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )
    logging.captureWarnings(True)
