"""
Growth of the triangular projection norm ||T||_{S^1_d -> S^1_d} in d.
"""
from __future__ import annotations

import functools
import logging
import math
from typing import Sequence

import numpy as np

from src.schatten.maps import LinearMatrixMap, MapNormEstimate, map_norm_ascent
from src.schatten.norms import SchattenMatrix
from src.schatten.truncation import MaskedTruncation
from src.schatten.witnesses import witness_library
from src.tasks import run_tasks

logger = logging.getLogger(__name__)

DEFAULT_RESTARTS = 4


def triangular_map(d: int) -> LinearMatrixMap:
    return LinearMatrixMap.from_truncation(MaskedTruncation.strict_upper(d))


def _estimate_one(d: int, restarts: int, seed: int) -> MapNormEstimate:
    phi = triangular_map(d)
    if d == 1:
        X = np.ones((1, 1), dtype=complex)
        return MapNormEstimate(1, 0.0, SchattenMatrix(X), "witness-library", witness_tag="e11")
    estimate = map_norm_ascent(phi, d, restarts=restarts, seed=seed, starts=witness_library(d, seed))
    logger.info("d=%d: %.12g (start %s)", d, estimate.lower_bound, estimate.witness_tag)
    return estimate


def _pad(X: np.ndarray, d: int) -> np.ndarray:
    """Embed X in the top-left corner of a d x d zero matrix."""
    out = np.zeros((d, d), dtype=complex)
    k = X.shape[0]
    out[:k, :k] = X
    return out


def estimate_triangular_norms(
    d_list: Sequence[int],
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    jobs: int = 1,
) -> list[MapNormEstimate]:
    """
    Dual-ascent lower bounds on ||T_d|| for every d, in increasing d.

    T_k is the compression of T_d to the top-left k x k block, so ||T_d|| is
    nondecreasing in d. Whenever an estimate falls below the previous one,
    the previous witness is zero-padded and polished by ascent at the
    larger size; the result is then at least the previous value.
    """
    ds = sorted(set(int(d) for d in d_list))
    if any(d < 1 for d in ds):
        raise ValueError(f"matrix sizes must be positive, got {ds}")
    estimates = run_tasks(functools.partial(_estimate_one, restarts=restarts, seed=seed), ds, jobs)
    for k in range(1, len(estimates)):
        previous, current = estimates[k - 1], estimates[k]
        if current.lower_bound >= previous.lower_bound:
            continue
        d = current.d
        start = _pad(previous.witness.entries, d)
        polished = map_norm_ascent(triangular_map(d), d, restarts=1, seed=seed,
                                   starts=[(f"padded-{previous.d}", start)])
        logger.info("d=%d: padded witness from d=%d gives %.12g", d, previous.d, polished.lower_bound)
        if polished.lower_bound > current.lower_bound:
            estimates[k] = polished
    return estimates


def log_slope(ds: Sequence[int], values: Sequence[float]) -> float:
    """Least-squares slope of values against ln d."""
    if len(ds) < 2:
        return math.nan
    slope, _ = np.polyfit(np.log(np.asarray(ds, dtype=float)), np.asarray(values, dtype=float), 1)
    return float(slope)


def running_slopes(ds: Sequence[int], values: Sequence[float]) -> list[float]:
    """Slope over the first k points for every k; NaN while fewer than two points."""
    return [log_slope(ds[:k], values[:k]) for k in range(1, len(ds) + 1)]
