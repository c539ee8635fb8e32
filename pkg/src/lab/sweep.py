"""
End-to-end run: exact construction on the Stein decomposition, then
certificates for every d with the growth of the triangular norm alongside.

Usage:
    python -m src.lab.sweep --d 2..128 --witness best --jobs 8
"""
from __future__ import annotations

import argparse
import math
import sys

from src.construction.certify import TRANSFER_RTOL, WITNESS_STRATEGIES, SweepResult, sweep
from src.construction.checker import verify_state
from src.construction.stepper import default_stein, place_exactly
from src.lab.certify import exit_code, report, write_outputs
from src.lab.config import EXIT_VERIFICATION_FAILED, RunConfig, add_common_arguments, parse_d_range
from src.lab.runner import execute
from src.lab.tables import write_table
from src.lab.tri_norm import COLUMNS as TRI_NORM_COLUMNS
from src.schatten.growth import DEFAULT_RESTARTS, running_slopes


def witness_rows(result: SweepResult) -> list[dict]:
    """tri_norm.csv rows from the witnesses the certificates used."""
    certificates = list(result.certificates)
    ds = [c.d for c in certificates]
    slopes = running_slopes(ds, [c.witness_ratio for c in certificates])
    return [
        {"d": c.d, "estimate": c.witness_ratio, "witness_tag": c.witness_tag,
         "ln_d": math.log(c.d), "running_slope": slope}
        for c, slope in zip(certificates, slopes)
    ]


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=str, default="2..128", help="Matrix sizes, e.g. 2,3,5 or 2..128 or 2..10:2")
    parser.add_argument("--witness", choices=WITNESS_STRATEGIES, default="best")
    parser.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    parser.add_argument("--steps", type=int, default=None, help="Construction levels (default: the largest d)")
    add_common_arguments(parser)


def run(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    ds = parse_d_range(args.d)
    steps = max(ds) if args.steps is None else args.steps
    D = default_stein(steps)
    state = place_exactly(D, steps)
    verification = verify_state(D, state)
    if not verification.ok:
        for problem in verification.problems:
            print(f"verification failed: {problem}", file=sys.stderr)
        return EXIT_VERIFICATION_FAILED
    rtol = TRANSFER_RTOL if config.tolerance is None else config.tolerance
    result = sweep(D, state, ds, args.witness, seed=config.seed, restarts=args.restarts, jobs=config.jobs, rtol=rtol)
    paths = write_outputs(result, config)
    paths.append(write_table(witness_rows(result), config.out / "tri_norm.csv", ["d"], TRI_NORM_COLUMNS))
    report(result, paths)
    return exit_code(result)


def main():
    parser = argparse.ArgumentParser(description="Construct on the Stein decomposition and certify a range of d")
    add_arguments(parser)
    raise SystemExit(execute(run, parser.parse_args()))


if __name__ == "__main__":
    main()
