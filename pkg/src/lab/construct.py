"""
Run the inductive construction and re-verify it independently.

Usage:
    python -m src.lab.construct --decomposition stein --steps 8 --mode exact
    python -m src.lab.construct --decomposition my_decomposition.json --steps 6 --mode scan --eta 1e-3
"""
from __future__ import annotations

import argparse
import sys

from src.construction.checker import verify_state
from src.construction.codec import report_to_document, state_to_document
from src.construction.schedule import DEFAULT_ETA, MODES, ScheduleConfig
from src.construction.state import ConstructionState
from src.construction.stepper import default_stein, place_exactly, run_construction
from src.decomposition.codec import load_decomposition
from src.decomposition.decomposition import MultiplierDecomposition
from src.lab.config import EXIT_OK, EXIT_VERIFICATION_FAILED, RunConfig, add_common_arguments
from src.lab.runner import execute
from src.lab.tables import write_document


def build_state(D: MultiplierDecomposition, schedule: ScheduleConfig, search: bool = False) -> ConstructionState:
    """Exact mode places frequencies past the supports unless a search is requested."""
    if schedule.exact and not search:
        return place_exactly(D, schedule.steps)
    return run_construction(D, schedule)


def resolve_decomposition(source: str, size: int | None, steps: int) -> MultiplierDecomposition:
    if source == "stein" and size is None:
        return default_stein(steps)
    return load_decomposition(source, size)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--decomposition", type=str, default="stein",
                        help='"stein", "basis", "identity" or a decomposition JSON file')
    parser.add_argument("--pieces", type=int, default=None,
                        help="Size of a built-in decomposition (default for stein: enough for --steps)")
    parser.add_argument("--steps", type=int, default=8, help="Number of levels to build")
    parser.add_argument("--eta", type=float, default=DEFAULT_ETA, help="Bound on every eps_n (scan mode)")
    parser.add_argument("--mode", choices=MODES, default="exact")
    parser.add_argument("--search", action="store_true", help="Exact mode through the frequency searches")
    parser.add_argument("--state-file", type=str, default="construction_state.json")
    add_common_arguments(parser)


def run(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    D = resolve_decomposition(args.decomposition, args.pieces, args.steps)
    schedule = ScheduleConfig(eta=args.eta, steps=args.steps, mode=args.mode, search_cap=config.cap)
    state = build_state(D, schedule, search=args.search)
    report = verify_state(D, state)
    document = state_to_document(D, state, verification=report_to_document(report))
    path = write_document(document, config.out / args.state_file)
    print(f"{D.name}: {state.level} levels, mask {list(state.mask)}")
    print(f"max eps {max(state.epsilons):.6e}, max re-measured residual {report.max_residual:.6e}")
    print(f"Wrote {path}")
    if not report.ok:
        for problem in report.problems:
            print(f"verification failed: {problem}", file=sys.stderr)
        return EXIT_VERIFICATION_FAILED
    return EXIT_OK


def main():
    parser = argparse.ArgumentParser(description="Run the frequency-selection construction")
    add_arguments(parser)
    raise SystemExit(execute(run, parser.parse_args()))


if __name__ == "__main__":
    main()
