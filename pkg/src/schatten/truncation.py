"""Masked truncations of matrices and the diagonal-modulation transfer."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.schatten.norms import SchattenMatrix, as_array
from src.torus.fourier import MatrixTrigPoly, ScalarTrigPoly


@dataclass(frozen=True)
class MaskedTruncation:
    """Entrywise truncation X -> (x_ij 1_{mask(i, j)})."""

    mask: np.ndarray
    name: str = "mask"

    def __post_init__(self):
        mask = np.array(self.mask, dtype=bool)
        if mask.ndim != 2 or mask.shape[0] != mask.shape[1]:
            raise ValueError(f"mask must be square, got shape {mask.shape}")
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)

    @classmethod
    def strict_upper(cls, d: int) -> MaskedTruncation:
        """The triangular projection: keep (i, j) iff j > i."""
        return cls(np.triu(np.ones((d, d), dtype=bool), k=1), name="strict-upper")

    @property
    def d(self) -> int:
        return self.mask.shape[0]

    def __call__(self, X) -> np.ndarray:
        X = as_array(X)
        if X.shape != self.mask.shape:
            raise ValueError(f"matrix of shape {X.shape} does not match mask {self.mask.shape}")
        return np.where(self.mask, X, 0)


def triangular_truncation(X) -> SchattenMatrix:
    """T(X) = (x_ij 1_{j > i})."""
    X = as_array(X)
    return SchattenMatrix(MaskedTruncation.strict_upper(X.shape[0])(X))


def diag_modulate(X, alpha: list[int], beta: list[int]) -> MatrixTrigPoly:
    """
    Z = diag(e_alpha) X diag(e_beta): entry (i, j) is x_ij e_{alpha_i + beta_j}.

    For every t, Z(t) is X conjugated by diagonal unitaries, so
    ||Z||_{H^1(S^1_d)} = ||X||_{S^1_d}.

    Raises:
        ValueError: frequency lists do not match the size of X, or contain
            negative frequencies
    """
    X = as_array(X)
    d = X.shape[0]
    if len(alpha) != d or len(beta) != d:
        raise ValueError(f"need {d} row and column frequencies, got {len(alpha)} and {len(beta)}")
    if min(alpha) < 0 or min(beta) < 0:
        raise ValueError("modulation frequencies must be non-negative")
    return MatrixTrigPoly(d, {
        (i, j): ScalarTrigPoly.monomial(alpha[i] + beta[j], X[i, j])
        for i in range(d) for j in range(d) if X[i, j] != 0
    })
