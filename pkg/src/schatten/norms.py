"""Trace-class (S^1_d) norms and related factorizations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Singular values below SVD_RTOL * sigma_max count as zero.
SVD_RTOL = 1e-12


@dataclass(frozen=True)
class SchattenMatrix:
    """A d x d complex matrix used as an element of S^1_d."""

    entries: np.ndarray

    def __post_init__(self):
        X = np.array(self.entries, dtype=complex)
        if X.ndim != 2 or X.shape[0] != X.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {X.shape}")
        X.setflags(write=False)
        object.__setattr__(self, "entries", X)

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    @property
    def norm(self) -> float:
        return trace_norm(self.entries)


def as_array(X) -> np.ndarray:
    if isinstance(X, SchattenMatrix):
        return X.entries
    return np.asarray(X, dtype=complex)


def singular_values(X) -> np.ndarray:
    s = np.linalg.svd(as_array(X), compute_uv=False)
    if s.size and s[0] > 0:
        s = np.where(s < SVD_RTOL * s[0], 0.0, s)
    return s


def trace_norm(X) -> float:
    """Sum of singular values."""
    return float(np.sum(singular_values(X)))


def operator_norm(X) -> float:
    s = singular_values(X)
    return float(s[0]) if s.size else 0.0


def batched_trace_norms(stack: np.ndarray) -> np.ndarray:
    """Trace norms of a stack of matrices, shape (..., d, d) -> (...)."""
    s = np.linalg.svd(stack, compute_uv=False)
    cutoff = SVD_RTOL * s[..., :1]
    return np.where(s < cutoff, 0.0, s).sum(axis=-1)


def polar_factor(A) -> np.ndarray:
    """
    Unitary factor W V^* of A = W S V^*.

    It maximizes Re tr(U^* A) over the operator-norm unit ball, the maximum
    being ||A||_{S^1}.
    """
    W, _, Vh = np.linalg.svd(as_array(A))
    return W @ Vh


def top_singular_pair(A) -> tuple[np.ndarray, np.ndarray, float]:
    """(u, v, sigma_1) with A v = sigma_1 u."""
    W, s, Vh = np.linalg.svd(as_array(A))
    return W[:, 0], Vh[0, :].conj(), float(s[0])
