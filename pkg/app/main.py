"""
Command-line entry point.
"""
import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from app.cli import VERBS
from app.core.config import settings
from app.core.errors import AlgebraError, BudgetExceeded, NegativeAnswer

# Configure logging
logging.basicConfig(
    level=logging.DEBUG if settings.DEBUG else getattr(logging, settings.LOG_LEVEL.upper()),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.APP_NAME,
        description="Algebraic tools for small atomic and subatomic nfas",
    )
    subparsers = parser.add_subparsers(dest="verb", required=True)
    for verb in VERBS:
        verb.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one verb; exit 0 on success, 1 on a negative answer, 2 on bad
    input and 3 when a search budget runs out.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    logger.debug(f"running {args.verb}")
    try:
        return args.handler(args)
    except BudgetExceeded as e:
        logger.error(f"budget exhausted: {e}")
        print(f"lower: {e.lower}\nupper: {'none' if e.upper is None else e.upper}")
        return EXIT_BUDGET
    except NegativeAnswer as e:
        logger.error(str(e))
        return EXIT_NO
    except (AlgebraError, ValidationError) as e:
        logger.error(f"invalid input: {e}")
        return EXIT_INPUT
    except OSError as e:
        logger.error(f"cannot write output: {e}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
