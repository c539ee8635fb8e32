"""
Single entry point for the lab subcommands.

Usage:
    python -m src.lab.main tri-norm --d 4..256
    python -m src.lab.main construct --decomposition stein --steps 8
    python -m src.lab.main certify --state data/outputs/construction_state.json --d 2..8
    python -m src.lab.main probe --decomposition stein --pieces 8 --mode signs
    python -m src.lab.main sweep --d 2..128 --jobs 8
"""
from __future__ import annotations

import argparse

from src.lab import certify, construct, probe, sweep, tri_norm
from src.lab.runner import execute

SUBCOMMANDS = {
    "tri-norm": (tri_norm, "Estimate the triangular projection norm on S^1_d"),
    "construct": (construct, "Run the frequency-selection construction"),
    "certify": (certify, "Certify lower bounds from a constructed state"),
    "probe": (probe, "Probe unconditionality constants of a decomposition"),
    "sweep": (sweep, "Construct on the Stein decomposition and certify a range of d"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="h1lab", description="Transfer experiments for H^1 of the torus")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, (module, help_text) in SUBCOMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text, description=help_text)
        module.add_arguments(sub)
        sub.set_defaults(run=module.run)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return execute(args.run, args)


if __name__ == "__main__":
    raise SystemExit(main())
