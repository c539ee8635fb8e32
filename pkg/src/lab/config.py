"""Run configuration shared by the lab subcommands."""
from __future__ import annotations

import argparse
import os
import re
from dataclasses import dataclass
from pathlib import Path

from src.construction.schedule import DEFAULT_SEARCH_CAP

OUTPUT_DIR = Path(os.environ.get("H1LAB_OUTPUT_DIR", "data/outputs"))
DEFAULT_SEED = 0

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INVALID_ARGUMENT = 2
EXIT_SEARCH_EXHAUSTED = 3
EXIT_TRANSFER_INEQUALITY = 4


class InvalidRange(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on besides its subcommand arguments."""

    seed: int = DEFAULT_SEED
    jobs: int = 1
    out: Path = OUTPUT_DIR
    tolerance: float | None = None
    cap: int = DEFAULT_SEARCH_CAP

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        return cls(seed=args.seed, jobs=args.jobs, out=Path(args.out), tolerance=args.tolerance, cap=args.cap)


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Master seed (default: 0)")
    parser.add_argument("--jobs", type=int, default=1, help="Worker processes (default: 1, inline)")
    parser.add_argument("--out", type=str, default=str(OUTPUT_DIR),
                        help="Output directory (default: $H1LAB_OUTPUT_DIR or data/outputs)")
    parser.add_argument("--tolerance", type=float, default=None, help="Override the numerical tolerance of the subcommand")
    parser.add_argument("--cap", type=int, default=DEFAULT_SEARCH_CAP, help="Frequency search cap (default: 2^31)")
    parser.add_argument("--verbose", action="store_true", help="Log library progress to stderr")


_RANGE = re.compile(r"^(\d+)\.\.(\d+)(?::(\d+))?$")


def parse_d_range(text: str) -> list[int]:
    """
    Parse matrix sizes: "2,3,5", "4..256" (doubling: 4, 8, ..., 256) or
    "2..10:2" (stepped: 2, 4, ..., 10). Parts may be mixed with commas.

    Raises:
        InvalidRange: malformed text, sizes < 1 or an empty range
    """
    sizes: set[int] = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise InvalidRange(f"empty entry in {text!r}")
        match = _RANGE.match(part)
        if match:
            lo, hi, stride = int(match.group(1)), int(match.group(2)), match.group(3)
            if lo < 1 or hi < lo:
                raise InvalidRange(f"invalid range {part!r}")
            if stride is None:
                d = lo
                while d <= hi:
                    sizes.add(d)
                    d *= 2
            else:
                if int(stride) < 1:
                    raise InvalidRange(f"invalid stride in {part!r}")
                sizes.update(range(lo, hi + 1, int(stride)))
        elif part.isdigit():
            if int(part) < 1:
                raise InvalidRange(f"matrix size must be >= 1, got {part}")
            sizes.add(int(part))
        else:
            raise InvalidRange(f"cannot parse {part!r}")
    return sorted(sizes)
