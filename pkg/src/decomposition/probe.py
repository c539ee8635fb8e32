"""
Sampled lower bounds for the (completely) unconditional constant of a
decomposition: sup over coefficient vectors a of ||sum_k a_k P_k||.
"""
from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.decomposition.decomposition import MultiplierDecomposition
from src.decomposition.sums import CoefficientVector, amplified_apply, apply_sum, sum_norms
from src.seeding import task_rng
from src.tasks import run_tasks
from src.torus.fourier import (
    MatrixTrigPoly,
    ScalarTrigPoly,
    fejer_kernel,
    random_analytic_poly,
    vallee_poussin_kernel,
)
from src.torus.quadrature import QuadratureGrid, h1_matrix_norm, l1_norm

logger = logging.getLogger(__name__)

DEFAULT_DEGREE = 64
MAX_DEFAULT_DEGREE = 2**14
DEFAULT_RANDOM_TESTS = 4


@dataclass(frozen=True)
class ProbeResult:
    """Best ratio found, with the coefficient vector and test function achieving it."""

    ratio: float
    coefficients: CoefficientVector
    test_tag: str
    mode: str
    d: int | None = None
    trials: int = 0


def restored_horizon(D: MultiplierDecomposition) -> int | None:
    """Largest breakpoint m at which the full decomposition restores e_m; None if there is none."""
    for m in reversed(D.breakpoints(range(len(D)))):
        if m >= 0 and D.completeness_index(m) is not None:
            return m
    return None


def default_degree(D: MultiplierDecomposition) -> int:
    """
    Degree of the default scalar test set for D: its restored horizon, so
    that every piece up to the last one sees test-function energy.
    """
    horizon = restored_horizon(D)
    if horizon is None:
        return DEFAULT_DEGREE
    return max(2, min(horizon, MAX_DEFAULT_DEGREE))


def default_test_set(degree: int = DEFAULT_DEGREE, seed: int = 0,
                     random_tests: int = DEFAULT_RANDOM_TESTS) -> list[tuple[str, ScalarTrigPoly]]:
    """Analytic Fejer and de la Vallee-Poussin kernels and random analytic polynomials, all of degree <= degree."""
    tests = [(f"fejer-{degree // 2}", fejer_kernel(degree // 2))]
    if degree >= 4:
        tests.append((f"vallee-poussin-{degree // 4}", vallee_poussin_kernel(degree // 4)))
    for k in range(random_tests):
        tests.append((f"random-{k}", random_analytic_poly(degree, task_rng(seed, "test", k))))
    return tests


def coefficient_rows(mode: str, length: int, trials: int, seed: int) -> np.ndarray:
    """
    All-ones row followed by `trials` random rows.

    Row t comes from its own generator and draws coordinates in order, so the
    first k coordinates do not depend on the row length.
    """
    rows = [np.ones(length)]
    for t in range(trials):
        u = task_rng(seed, "trial", t).random(length)
        if mode == "signs":
            rows.append(np.where(u < 0.5, -1.0, 1.0))
        elif mode == "mask":
            rows.append(np.where(u < 0.5, 0.0, 1.0))
        elif mode == "box":
            rows.append(2 * u - 1)
        else:
            raise ValueError(f"unknown probe mode {mode!r}")
    return np.vstack(rows)


def _vector(row: np.ndarray, mode: str) -> CoefficientVector:
    values = tuple(int(a) if mode != "box" else float(a) for a in row)
    return CoefficientVector(values, mode)


def _scalar_task(test: tuple[str, ScalarTrigPoly], D: MultiplierDecomposition, rows: np.ndarray, mode: str):
    """
    Rank the rows on one fixed grid, then re-measure the best row and the
    all-ones row 0 with the converged L^1 norm.
    """
    tag, f = test
    grid = QuadratureGrid.for_bandwidth(_union_bandwidth(D, rows.shape[1], f))
    coarse = sum_norms(D, rows, f, grid) / l1_norm(f, grid)
    base = l1_norm(f)
    best = (-1.0, 0)
    for k in dict.fromkeys((int(np.argmax(coarse)), 0)):
        ratio = l1_norm(apply_sum(D, _vector(rows[k], mode), f)) / base
        logger.debug("%s row %d: grid ratio %.12g, converged %.12g", tag, k, coarse[k], ratio)
        if ratio > best[0]:
            best = (ratio, k)
    return best[0], best[1], tag


def _union_bandwidth(D: MultiplierDecomposition, length: int, f: ScalarTrigPoly) -> int:
    freqs = set(f.coeffs)
    for m in f.coeffs:
        for k in D.touching(m):
            if k < length:
                freqs.update(D.column(k, m))
    return max(freqs) - min(freqs)


def _matrix_task(test: tuple[str, MatrixTrigPoly], D: MultiplierDecomposition, vectors: list[CoefficientVector]):
    tag, F = test
    base = h1_matrix_norm(F)
    best = (-1.0, 0)
    for k, a in enumerate(vectors):
        ratio = h1_matrix_norm(amplified_apply(D, a, F)) / base
        if ratio > best[0]:
            best = (ratio, k)
    return best[0], best[1], tag


def unconditionality_probe(
    D: MultiplierDecomposition,
    mode: str = "signs",
    trials: int = 256,
    seed: int = 0,
    *,
    length: int | None = None,
    test_set: Sequence[tuple[str, ScalarTrigPoly]] | None = None,
    witnesses: Sequence[tuple[str, MatrixTrigPoly]] | None = None,
    masks: Sequence[CoefficientVector] = (),
    degree: int | None = None,
    jobs: int = 1,
) -> ProbeResult:
    """
    Max of ||sum_k a_k P_k f|| / ||f|| over sampled coefficient vectors a and
    test functions f.

    Without witnesses the scalar L^1 ratio is probed on the test set. With
    matrix witnesses (e.g. transfer elements Z) the amplified H^1(S^1_d)
    ratio is probed instead, and the supplied masks (e.g. the construction's
    final mask) are evaluated along with the sampled vectors.

    The all-ones vector is always included, so a decomposition that
    restores every test function gives a ratio of at least 1. Scalar rows
    are ranked on one fixed grid; the reported ratio of the best row is
    re-measured with the converged L^1 norm.

    Args:
        D: Decomposition
        mode: "signs", "mask" or "box"
        trials: Number of random coefficient vectors (>= 1; 0 is allowed in
            amplified mode when masks are given)
        seed: Master seed
        length: Number of coefficients (default: all pieces)
        test_set: Tagged scalar test functions (default: default_test_set)
        witnesses: Tagged matrix test functions; switches to amplified mode
        masks: Extra coefficient vectors evaluated in amplified mode
        degree: Degree of the default scalar test set (default: default_degree(D))
        jobs: Worker processes, one task per test function

    Returns:
        ProbeResult with the best ratio
    """
    if trials < (0 if witnesses and masks else 1):
        raise ValueError(f"trials must be >= 1, got {trials}")
    length = len(D) if length is None else length
    if length > len(D):
        raise ValueError(f"{length} coefficients for a decomposition of {len(D)} pieces")
    rows = coefficient_rows(mode, length, trials, seed)
    if witnesses:
        vectors = [_vector(row, mode) for row in rows] + [
            CoefficientVector(m.values[:length], m.mode) for m in masks
        ]
        results = run_tasks(functools.partial(_matrix_task, D=D, vectors=vectors), list(witnesses), jobs)
        d = witnesses[0][1].d
    else:
        if test_set is None:
            test_set = default_test_set(default_degree(D) if degree is None else degree, seed)
        vectors = None
        results = run_tasks(functools.partial(_scalar_task, D=D, rows=rows, mode=mode), list(test_set), jobs)
        d = None
    ratio, k, tag = max(results, key=lambda r: r[0])
    coefficients = vectors[k] if vectors is not None else _vector(rows[k], mode)
    logger.info("probe %s: best ratio %.12g on %s", mode, ratio, tag)
    return ProbeResult(ratio, coefficients, tag, mode, d=d, trials=trials)
