"""Maps failures of a subcommand to the lab's exit codes."""
import argparse
import logging
import sys
from typing import Callable

from src.construction.certify import TransferInequalityViolated
from src.construction.search import HorizonExhausted, SearchCapExceeded
from src.construction.stepper import ConstructionError
from src.lab.config import (
    EXIT_INVALID_ARGUMENT,
    EXIT_SEARCH_EXHAUSTED,
    EXIT_TRANSFER_INEQUALITY,
    EXIT_VERIFICATION_FAILED,
)
from src.schema import DocumentValidationError


def exit_code_for(exc: BaseException) -> int | None:
    if isinstance(exc, TransferInequalityViolated):
        return EXIT_TRANSFER_INEQUALITY
    if isinstance(exc, (SearchCapExceeded, HorizonExhausted)):
        return EXIT_SEARCH_EXHAUSTED
    if isinstance(exc, ConstructionError):
        return EXIT_VERIFICATION_FAILED
    if isinstance(exc, (DocumentValidationError, ValueError, FileNotFoundError)):
        return EXIT_INVALID_ARGUMENT
    return None


def execute(run: Callable[[argparse.Namespace], int], args: argparse.Namespace) -> int:
    """Run a subcommand; known failures are reported on stderr as exit codes."""
    logging.basicConfig(level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return run(args)
    except Exception as exc:
        code = exit_code_for(exc)
        if code is None:
            raise
        print(f"error: {exc}", file=sys.stderr)
        return code
