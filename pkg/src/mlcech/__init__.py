"""Mlcech: Čech cohomology and Mittag-Leffler constructions in the complex plane,
on the projective line and on complex tori."""

import logging
import sys
from typing import List, Optional

from .configure import setup

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_MATH = 3
EXIT_IO = 4


def main(argv: Optional[List[str]] = None) -> int:
    "Entry point for the application script."
    try:
        args = setup(argv)
    except SystemExit as e:
        # argparse exits with 2 on usage errors and 0 on --help
        return int(e.code or 0)
    logger = logging.getLogger(__name__)
    try:
        cmd = args.init(args)
        cmd.run()
    except ArithmeticError as e:
        logger.error(f"mathematical failure: {e}")
        return EXIT_MATH
    except ValueError as e:
        logger.error(f"invalid input: {e}")
        return EXIT_SCHEMA
    except OSError as e:
        logger.error(f"I/O failure: {e}")
        return EXIT_IO
    return EXIT_OK


def run() -> None:
    "Console script wrapper that exits with the code of `main`."
    sys.exit(main())
