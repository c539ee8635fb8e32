"""
Transfer certificates for a constructed state.

Usage:
    python -m src.lab.certify --state data/outputs/construction_state.json --d 2..64 --witness best
"""
from __future__ import annotations

import argparse
import math
import sys

from src.construction.certify import ASYMPTOTIC_SLOPE_FROM, TRANSFER_RTOL, WITNESS_STRATEGIES, SweepResult, sweep
from src.construction.codec import certificate_to_document, state_from_document
from src.jsonio import read_json
from src.lab.config import (
    EXIT_INVALID_ARGUMENT,
    EXIT_OK,
    EXIT_TRANSFER_INEQUALITY,
    RunConfig,
    add_common_arguments,
    parse_d_range,
)
from src.lab.runner import execute
from src.lab.tables import write_document, write_table
from src.schatten.growth import DEFAULT_RESTARTS

COLUMNS = ["d", "C_lb", "ln_d", "A", "B", "slack", "epsilon", "witness_tag", "degenerate"]


def certificate_rows(result: SweepResult) -> list[dict]:
    return [
        {"d": c.d, "C_lb": c.C_lb, "ln_d": math.log(c.d), "A": c.A, "B": c.B, "slack": c.slack,
         "epsilon": c.epsilon, "witness_tag": c.witness_tag, "degenerate": c.degenerate}
        for c in result.certificates
    ]


def _finite_or_none(value: float) -> float | None:
    return None if math.isnan(value) else value


def summary_document(result: SweepResult) -> dict:
    return {
        "slope": _finite_or_none(result.slope),
        "asymptotic_slope": _finite_or_none(result.asymptotic_slope),
        "asymptotic_from": ASYMPTOTIC_SLOPE_FROM,
        "certificates": len(result.certificates),
        "degenerate": [c.d for c in result.certificates if c.degenerate],
        "failures": [{"d": f.d, "kind": f.kind, "message": f.message} for f in result.failures],
    }


def write_outputs(result: SweepResult, config: RunConfig, prefix: str = "certificates") -> list:
    paths = [
        write_document([certificate_to_document(c) for c in result.certificates], config.out / f"{prefix}.json"),
        write_table(certificate_rows(result), config.out / f"{prefix}.csv", ["d", "witness_tag"], COLUMNS),
        write_document(summary_document(result), config.out / "summary.json"),
    ]
    return paths


def exit_code(result: SweepResult) -> int:
    kinds = {f.kind for f in result.failures}
    if "transfer-inequality" in kinds:
        return EXIT_TRANSFER_INEQUALITY
    if kinds:
        return EXIT_INVALID_ARGUMENT
    return EXIT_OK


def report(result: SweepResult, paths: list) -> None:
    for c in result.certificates:
        flag = " (degenerate)" if c.degenerate else ""
        print(f"d={c.d}: C_lb={c.C_lb:.12g} A={c.A:.12g} B={c.B:.12g} slack={c.slack:.3e}{flag}")
    for f in result.failures:
        print(f"d={f.d}: {f.kind}: {f.message}", file=sys.stderr)
    print(f"slope of C_lb against ln d: {result.slope:.6g}")
    print(f"slope over d >= {ASYMPTOTIC_SLOPE_FROM}: {result.asymptotic_slope:.6g}")
    for path in paths:
        print(f"Wrote {path}")


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--state", type=str, required=True, help="construction_state.json written by construct")
    parser.add_argument("--d", type=str, default="2..8", help="Matrix sizes, e.g. 2,3,5 or 2..64 or 2..10:2")
    parser.add_argument("--witness", choices=WITNESS_STRATEGIES, default="best")
    parser.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    add_common_arguments(parser)


def run(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    ds = parse_d_range(args.d)
    D, state = state_from_document(read_json(args.state))
    rtol = TRANSFER_RTOL if config.tolerance is None else config.tolerance
    result = sweep(D, state, ds, args.witness, seed=config.seed, restarts=args.restarts, jobs=config.jobs, rtol=rtol)
    report(result, write_outputs(result, config))
    return exit_code(result)


def main():
    parser = argparse.ArgumentParser(description="Certify lower bounds from a constructed state")
    add_arguments(parser)
    raise SystemExit(execute(run, parser.parse_args()))


if __name__ == "__main__":
    main()
