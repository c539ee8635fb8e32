"""
Lower bounds on the triangular projection norm on S^1_d, per d.

Usage:
    python -m src.lab.tri_norm --d 4..256 --method ascent
"""
from __future__ import annotations

import argparse
import functools
import math

from src.lab.config import RunConfig, add_common_arguments, parse_d_range
from src.lab.runner import execute
from src.lab.tables import write_table
from src.schatten.growth import DEFAULT_RESTARTS, estimate_triangular_norms, running_slopes, triangular_map
from src.schatten.maps import MapNormEstimate, map_norm_brute_force, map_norm_lower
from src.schatten.witnesses import witness_library
from src.tasks import run_tasks

METHODS = ("ascent", "library", "brute-force")
COLUMNS = ["d", "estimate", "witness_tag", "ln_d", "running_slope"]


def _library_estimate(d: int, seed: int) -> MapNormEstimate:
    tags, witnesses = zip(*witness_library(d, seed))
    return map_norm_lower(triangular_map(d), list(witnesses), list(tags))


def _brute_force_estimate(d: int, seed: int, samples: int) -> MapNormEstimate:
    return map_norm_brute_force(triangular_map(d), d, samples=samples, seed=seed)


def estimate(ds: list[int], method: str, config: RunConfig, restarts: int, samples: int) -> list[MapNormEstimate]:
    if method == "ascent":
        return estimate_triangular_norms(ds, restarts=restarts, seed=config.seed, jobs=config.jobs)
    if method == "library":
        return [_library_estimate(d, config.seed) for d in ds]
    if method == "brute-force":
        return run_tasks(functools.partial(_brute_force_estimate, seed=config.seed, samples=samples), ds, config.jobs)
    raise ValueError(f"unknown method {method!r}")


def tri_norm_rows(estimates: list[MapNormEstimate]) -> list[dict]:
    ds = [e.d for e in estimates]
    values = [e.lower_bound for e in estimates]
    slopes = running_slopes(ds, values)
    return [
        {"d": e.d, "estimate": float(e.lower_bound), "witness_tag": e.witness_tag,
         "ln_d": math.log(e.d), "running_slope": slope}
        for e, slope in zip(estimates, slopes)
    ]


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=str, default="2..64", help="Matrix sizes, e.g. 2,3,5 or 4..256 or 2..10:2")
    parser.add_argument("--method", choices=METHODS, default="ascent")
    parser.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS, help="Random restarts per d (ascent)")
    parser.add_argument("--samples", type=int, default=1_000_000, help="Rank-one samples per d (brute-force)")
    add_common_arguments(parser)


def run(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    ds = parse_d_range(args.d)
    estimates = estimate(ds, args.method, config, args.restarts, args.samples)
    path = write_table(tri_norm_rows(estimates), config.out / "tri_norm.csv", ["d"], COLUMNS)
    for e in estimates:
        print(f"d={e.d}: {e.lower_bound:.12g} ({e.witness_tag})")
    print(f"Wrote {path}")
    return 0


def main():
    parser = argparse.ArgumentParser(description="Estimate the triangular projection norm on S^1_d")
    add_arguments(parser)
    raise SystemExit(execute(run, parser.parse_args()))


if __name__ == "__main__":
    main()
