"""
Sampled unconditionality probes, scalar or amplified.

Usage:
    python -m src.lab.probe --decomposition stein --pieces 8 --mode signs --trials 512
    python -m src.lab.probe --decomposition stein --d 2,4,8 --trials 64
"""
from __future__ import annotations

import argparse
import math

from src.construction.certify import WITNESS_STRATEGIES, strategy_witness, transfer_element
from src.construction.codec import state_from_document
from src.construction.state import ConstructionState
from src.construction.stepper import default_stein, place_exactly
from src.decomposition.codec import load_decomposition
from src.decomposition.decomposition import MultiplierDecomposition
from src.decomposition.probe import ProbeResult, unconditionality_probe
from src.jsonio import read_json
from src.lab.config import RunConfig, add_common_arguments, parse_d_range
from src.lab.runner import execute
from src.lab.tables import write_table
from src.schatten.growth import DEFAULT_RESTARTS, estimate_triangular_norms

PROBE_MODES = ("signs", "box", "mask")
DEFAULT_PIECES = 8
COLUMNS = ["d", "pieces", "mode", "ratio", "ratio_previous", "stabilization", "test_tag", "coefficients"]


def _format_coefficients(result: ProbeResult) -> str:
    return " ".join(f"{a:g}" for a in result.coefficients.values)


def scalar_rows(source: str, size: int, mode: str, trials: int, degree: int | None, config: RunConfig) -> list[dict]:
    """Probe at the given size and, for stein, at size - 2 for the stabilization ratio."""
    D = load_decomposition(source, size)
    result = unconditionality_probe(D, mode, trials, config.seed, degree=degree, jobs=config.jobs)
    previous = math.nan
    if source == "stein" and size - 2 >= 1:
        previous = unconditionality_probe(load_decomposition(source, size - 2), mode, trials, config.seed,
                                          degree=degree, jobs=config.jobs).ratio
    return [{
        "d": 0, "pieces": len(D), "mode": mode, "ratio": result.ratio, "ratio_previous": previous,
        "stabilization": result.ratio / previous if previous == previous else math.nan,
        "test_tag": result.test_tag, "coefficients": _format_coefficients(result),
    }]


def amplified_rows(
    D: MultiplierDecomposition,
    state: ConstructionState,
    ds: list[int],
    mode: str,
    trials: int,
    witness: str,
    config: RunConfig,
    restarts: int = DEFAULT_RESTARTS,
) -> list[dict]:
    """Probe sum_k a_k P_k (x) Id on the construction's transfer elements Z, one d at a time."""
    if witness == "best":
        estimates = estimate_triangular_norms(ds, restarts=restarts, seed=config.seed, jobs=config.jobs)
        witnesses = [(f"best:{e.witness_tag}", e.witness.entries) for e in estimates]
    else:
        witnesses = [strategy_witness(witness, d) for d in ds]
    rows = []
    for d, (tag, X) in zip(ds, witnesses):
        result = unconditionality_probe(
            D, mode, trials, config.seed,
            witnesses=[(f"Z[{tag}]", transfer_element(state, X))],
            masks=[state.coefficients()],
            jobs=config.jobs,
        )
        rows.append({
            "d": d, "pieces": len(D), "mode": mode, "ratio": result.ratio, "ratio_previous": math.nan,
            "stabilization": math.nan, "test_tag": result.test_tag, "coefficients": _format_coefficients(result),
        })
    return rows


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--decomposition", type=str, default="stein",
                        help='"stein", "basis", "identity" or a decomposition JSON file')
    parser.add_argument("--pieces", type=int, default=None,
                        help=f"Size of a built-in decomposition (default {DEFAULT_PIECES}); scalar probes only")
    parser.add_argument("--mode", choices=PROBE_MODES, default="signs")
    parser.add_argument("--trials", type=int, default=256)
    parser.add_argument("--degree", type=int, default=None,
                        help="Degree of the scalar test polynomials (default: the decomposition's restored horizon)")
    parser.add_argument("--d", type=str, default=None, help="Matrix sizes for the amplified probe")
    parser.add_argument("--state", type=str, default=None,
                        help="construction_state.json for the amplified probe (default: exact stein placement)")
    parser.add_argument("--witness", choices=WITNESS_STRATEGIES, default="best")
    parser.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS, help="Ascent restarts for the best witness")
    add_common_arguments(parser)


def run(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    if args.d is None:
        pieces = DEFAULT_PIECES if args.pieces is None else args.pieces
        rows = scalar_rows(args.decomposition, pieces, args.mode, args.trials, args.degree, config)
    else:
        if args.decomposition != "stein" or args.pieces is not None:
            raise ValueError("--decomposition and --pieces apply to scalar probes; amplified probes use the "
                             "decomposition of --state or the exact stein placement")
        ds = parse_d_range(args.d)
        if args.state is not None:
            D, state = state_from_document(read_json(args.state))
        else:
            D = default_stein(max(ds))
            state = place_exactly(D, max(ds))
        rows = amplified_rows(D, state, ds, args.mode, args.trials, args.witness, config, args.restarts)
    path = write_table(rows, config.out / "probe.csv", ["d", "pieces"], COLUMNS)
    for row in rows:
        print(f"d={row['d']} pieces={row['pieces']}: ratio {row['ratio']:.12g} on {row['test_tag']}")
    print(f"Wrote {path}")
    return 0


def main():
    parser = argparse.ArgumentParser(description="Probe unconditionality constants of a decomposition")
    add_arguments(parser)
    raise SystemExit(execute(run, parser.parse_args()))


if __name__ == "__main__":
    main()
