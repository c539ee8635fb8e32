"""
Norm estimates for linear maps on d x d matrices.

Only lower bounds are produced: every reported value is a ratio
||Phi(X)|| / ||X|| recomputed at an explicit witness X.
"""
from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from src.schatten.norms import (
    SchattenMatrix,
    as_array,
    batched_trace_norms,
    operator_norm,
    polar_factor,
    top_singular_pair,
    trace_norm,
)
from src.schatten.truncation import MaskedTruncation
from src.schatten.witnesses import witness_library
from src.seeding import task_rng

logger = logging.getLogger(__name__)

MAX_ASCENT_ITERATIONS = 500
ASCENT_RTOL = 1e-9
BRUTE_FORCE_BATCH = 20_000

METHODS = ("witness-library", "dual-ascent", "brute-force")


class EmptyWitnessList(ValueError):
    pass


def _identity(X: np.ndarray) -> np.ndarray:
    return X.copy()


def _apply_matrix(M: np.ndarray, X: np.ndarray) -> np.ndarray:
    d = X.shape[0]
    return (M @ X.reshape(d * d)).reshape(d, d)


@dataclass(frozen=True)
class LinearMatrixMap:
    """
    A linear map on d x d matrices with its adjoint for <A, B> = tr(A^* B).

    forward and adjoint must be picklable when estimates run in worker
    processes.
    """

    d: int
    forward: Callable[[np.ndarray], np.ndarray]
    adjoint: Callable[[np.ndarray], np.ndarray]
    name: str = "map"

    def __call__(self, X) -> np.ndarray:
        return self.forward(as_array(X))

    @classmethod
    def identity(cls, d: int) -> LinearMatrixMap:
        return cls(d, _identity, _identity, name="identity")

    @classmethod
    def from_truncation(cls, truncation: MaskedTruncation) -> LinearMatrixMap:
        # entrywise masks are self-adjoint for the trace pairing
        return cls(truncation.d, truncation, truncation, name=truncation.name)

    @classmethod
    def from_function(cls, fn: Callable[[np.ndarray], np.ndarray], d: int, name: str = "map") -> LinearMatrixMap:
        """Build a map (and its adjoint) from any linear function via its d^2 x d^2 matrix."""
        M = _matrix_of(fn, d)
        return cls(d, functools.partial(_apply_matrix, M), functools.partial(_apply_matrix, M.conj().T), name=name)

    def matrix(self) -> np.ndarray:
        """Matrix of the map on row-major vec(X)."""
        return _matrix_of(self.forward, self.d)

    def ratio(self, X) -> float:
        X = as_array(X)
        return trace_norm(self(X)) / trace_norm(X)


def _matrix_of(fn, d: int) -> np.ndarray:
    M = np.zeros((d * d, d * d), dtype=complex)
    for k in range(d * d):
        E = np.zeros(d * d, dtype=complex)
        E[k] = 1
        M[:, k] = np.asarray(fn(E.reshape(d, d)), dtype=complex).reshape(d * d)
    return M


@dataclass(frozen=True)
class MapNormEstimate:
    """A certified lower bound ||Phi(witness)|| / ||witness|| on a map norm."""

    d: int
    lower_bound: float
    witness: SchattenMatrix
    method: str
    witness_tag: str = ""
    norm: str = "trace"
    iterations: int = 0
    extras: dict = field(default_factory=dict)


def map_norm_lower(
    phi: LinearMatrixMap,
    witnesses: Sequence,
    tags: Sequence[str] | None = None,
) -> MapNormEstimate:
    """
    Best ratio ||Phi(X)||_{S^1} / ||X||_{S^1} over a list of witnesses.

    Ties keep the first witness found.

    Raises:
        EmptyWitnessList: no witness given
        ValueError: a witness is zero
    """
    if not witnesses:
        raise EmptyWitnessList("at least one witness is required")
    tags = list(tags) if tags is not None else [f"witness-{k}" for k in range(len(witnesses))]
    best = None
    for tag, W in zip(tags, witnesses):
        X = as_array(W)
        norm = trace_norm(X)
        if norm == 0:
            raise ValueError(f"witness {tag} is zero")
        value = trace_norm(phi(X)) / norm
        if best is None or value > best[0]:
            best = (value, X, tag)
    value, X, tag = best
    return MapNormEstimate(phi.d, value, SchattenMatrix(X), "witness-library", witness_tag=tag)


def _trace_ascent(phi: LinearMatrixMap, X0: np.ndarray, max_iter: int, rtol: float):
    """Alternate U <- polar(Phi(X)) and X <- top rank-one of Phi^*(U)."""
    X = X0 / trace_norm(X0)
    value = trace_norm(phi(X))
    iterations = 0
    for iterations in range(1, max_iter + 1):
        U = polar_factor(phi(X))
        u, v, _ = top_singular_pair(phi.adjoint(U))
        candidate = np.outer(u, v.conj())
        new_value = trace_norm(phi(candidate))
        if new_value <= value * (1 + rtol):
            if new_value > value:
                X, value = candidate, new_value
            break
        X, value = candidate, new_value
    return value, X, iterations


def _operator_ascent(phi: LinearMatrixMap, X0: np.ndarray, max_iter: int, rtol: float):
    """Alternate W <- top rank-one of Phi(X) and X <- polar(Phi^*(W))."""
    X = polar_factor(X0)
    value = operator_norm(phi(X))
    iterations = 0
    for iterations in range(1, max_iter + 1):
        u, v, _ = top_singular_pair(phi(X))
        candidate = polar_factor(phi.adjoint(np.outer(u, v.conj())))
        new_value = operator_norm(phi(candidate))
        if new_value <= value * (1 + rtol):
            if new_value > value:
                X, value = candidate, new_value
            break
        X, value = candidate, new_value
    return value, X, iterations


def _random_start(d: int, rng: np.random.Generator, norm: str) -> np.ndarray:
    if norm == "trace":
        u = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        return np.outer(u, v.conj())
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def map_norm_ascent(
    phi: LinearMatrixMap,
    d: int,
    restarts: int = 4,
    seed: int = 0,
    *,
    norm: str = "trace",
    starts: Sequence[tuple[str, np.ndarray]] | None = None,
    max_iter: int = MAX_ASCENT_ITERATIONS,
    rtol: float = ASCENT_RTOL,
) -> MapNormEstimate:
    """
    Alternating dual ascent for the S^1 -> S^1 (or S^inf -> S^inf) norm.

    For the trace norm, Re tr(U^* Phi(X)) is maximized alternately over
    ||U||_op <= 1 (U is the polar factor of Phi(X)) and over ||X||_1 <= 1
    (X is the top singular rank-one matrix of Phi^*(U)). Each half-step
    can only increase the ratio, so starting from the witness library the
    result is never below the library's best ratio. The operator-norm
    variant swaps the roles of the two balls.

    Args:
        phi: The map
        d: Matrix size
        restarts: Number of random starts added to the library starts
        seed: Master seed; restart k uses a seed derived from (seed, k)
        norm: "trace" or "operator"
        starts: Tagged starting matrices; the witness library by default
        max_iter: Iteration cap per start
        rtol: Relative improvement below which a start stops

    Returns:
        Best stationary estimate, method "dual-ascent"
    """
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    if norm not in ("trace", "operator"):
        raise ValueError(f"unknown norm {norm!r}")
    ascend = _trace_ascent if norm == "trace" else _operator_ascent
    if starts is None:
        starts = witness_library(d, seed)
    starts = list(starts) + [
        (f"random-{k}", _random_start(d, task_rng(seed, "restart", d, k), norm)) for k in range(restarts)
    ]
    best = None
    for tag, X0 in starts:
        value, X, iterations = ascend(phi, np.asarray(X0, dtype=complex), max_iter, rtol)
        logger.debug("ascent from %s: %.12g after %d iterations", tag, value, iterations)
        if best is None or value > best[0]:
            best = (value, X, tag, iterations)
    value, X, tag, iterations = best
    return MapNormEstimate(d, value, SchattenMatrix(X), "dual-ascent",
                           witness_tag=tag, norm=norm, iterations=iterations)


def map_norm_brute_force(
    phi: LinearMatrixMap,
    d: int,
    samples: int = 1_000_000,
    seed: int = 0,
    *,
    polish: bool = True,
    batch: int = BRUTE_FORCE_BATCH,
) -> MapNormEstimate:
    """
    Random search over rank-one extreme points u v^* of the S^1 unit ball,
    followed by a Nelder-Mead polish and a dual-ascent polish of the best
    sample. Used as an independent oracle at small d.
    """
    M = phi.matrix()
    rng = task_rng(seed, "brute-force", d)
    best_value, best_X = -1.0, None
    for offset in range(0, samples, batch):
        n = min(batch, samples - offset)
        u = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
        v = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        X = u[:, :, None] * v.conj()[:, None, :]
        Y = (X.reshape(n, d * d) @ M.T).reshape(n, d, d)
        values = batched_trace_norms(Y)
        k = int(np.argmax(values))
        if values[k] > best_value:
            best_value, best_X = float(values[k]), X[k]
    if polish:
        best_X, best_value = _polish(phi, best_X, best_value)
    return MapNormEstimate(d, best_value, SchattenMatrix(best_X), "brute-force", witness_tag="random-search")


def _polish(phi: LinearMatrixMap, X: np.ndarray, value: float) -> tuple[np.ndarray, float]:
    d = phi.d
    u, v, _ = top_singular_pair(X)

    def objective(params):
        a = params[:d] + 1j * params[d:2 * d]
        b = params[2 * d:3 * d] + 1j * params[3 * d:]
        scale = np.linalg.norm(a) * np.linalg.norm(b)
        if scale == 0:
            return 0.0
        return -trace_norm(phi(np.outer(a, b.conj()))) / scale

    x0 = np.concatenate([u.real, u.imag, v.real, v.imag])
    result = minimize(objective, x0, method="Nelder-Mead",
                      options={"maxiter": 4000, "xatol": 1e-10, "fatol": 1e-13})
    a = result.x[:d] + 1j * result.x[d:2 * d]
    b = result.x[2 * d:3 * d] + 1j * result.x[3 * d:]
    candidate = np.outer(a, b.conj())
    if np.any(candidate != 0) and phi.ratio(candidate) > value:
        X, value = candidate / trace_norm(candidate), phi.ratio(candidate)
    ascent_value, ascent_X, _ = _trace_ascent(phi, X, MAX_ASCENT_ITERATIONS, ASCENT_RTOL)
    if ascent_value > value:
        return ascent_X, ascent_value
    return X, value
