"""Coefficient-weighted sums sum_k a_k P_k and their norms."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from src.decomposition.decomposition import MultiplierDecomposition, add_columns
from src.decomposition.pieces import column_l1
from src.torus.fourier import DIRECT_EVALUATION_TERMS, MatrixTrigPoly, ScalarTrigPoly, node_phases, spectrum_values
from src.torus.quadrature import QuadratureGrid

MODES = ("mask", "signs", "box")
ROW_CHUNK = 64


@dataclass(frozen=True)
class CoefficientVector:
    """
    Coefficients a_0, a_1, ... with |a_k| <= 1; coordinates past the end are 0.

    mode restricts the values: mask to {0, 1}, signs to {-1, +1}, box to [-1, 1].
    """

    values: tuple
    mode: str = "box"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown coefficient mode {self.mode!r}")
        values = tuple(self.values)
        if self.mode == "mask":
            allowed = lambda a: a in (0, 1)
        elif self.mode == "signs":
            allowed = lambda a: a in (-1, 1)
        else:
            allowed = lambda a: -1 <= a <= 1
        bad = [a for a in values if not allowed(a)]
        if bad:
            raise ValueError(f"coefficients {bad[:3]} not allowed in {self.mode} mode")
        object.__setattr__(self, "values", values)

    @classmethod
    def ones(cls, length: int, mode: str = "mask") -> CoefficientVector:
        return cls((1,) * length, mode)

    @classmethod
    def from_intervals(cls, intervals: Iterable[tuple[int, int]], length: int | None = None) -> CoefficientVector:
        """Mask equal to 1 on the closed index intervals [k, N]."""
        intervals = list(intervals)
        top = max((hi for _, hi in intervals), default=-1)
        length = top + 1 if length is None else length
        values = [0] * length
        for lo, hi in intervals:
            for k in range(lo, hi + 1):
                values[k] = 1
        return cls(tuple(values), "mask")

    def __len__(self) -> int:
        return len(self.values)

    def __call__(self, k: int):
        return self.values[k] if 0 <= k < len(self.values) else 0

    def support(self) -> tuple[int, ...]:
        return tuple(k for k, a in enumerate(self.values) if a != 0)


def _check_length(D: MultiplierDecomposition, a: CoefficientVector) -> None:
    if len(a) > len(D):
        raise ValueError(f"{len(a)} coefficients for a decomposition of {len(D)} pieces")


def apply_sum(D: MultiplierDecomposition, a: CoefficientVector, f: ScalarTrigPoly) -> ScalarTrigPoly:
    """sum_k a_k P_k(f), computed in coefficient space."""
    _check_length(D, a)
    out: dict = {}
    for m, c in f.coeffs.items():
        add_columns(out, D.column_sum(a, m), c)
    return ScalarTrigPoly(out)


def amplified_apply(D: MultiplierDecomposition, a: CoefficientVector, F: MatrixTrigPoly) -> MatrixTrigPoly:
    """sum_k a_k (P_k (x) Id)(F): the scalar action on every matrix entry."""
    _check_length(D, a)
    return MatrixTrigPoly(F.d, {ij: apply_sum(D, a, p) for ij, p in F.entries.items()})


def tail_bound(D: MultiplierDecomposition, frequencies: Iterable[int], K: int):
    """
    max_m sum_{t >= K} ||P_t(e_m)||_{l^1} over the given frequencies.

    By the triangle inequality this bounds ||sum_{t=k}^{l} a_t P_t(e_m)||_1
    for all K <= k <= l and all |a_t| <= 1. Exact for rational pieces.
    """
    best = Fraction(0)
    for m in frequencies:
        total = sum((column_l1(D.column(t, m)) for t in D.touching(m) if t >= K), Fraction(0))
        best = max(best, total)
    return best


def piece_images(D: MultiplierDecomposition, length: int, f: ScalarTrigPoly) -> list[ScalarTrigPoly]:
    """P_k(f) for k < length."""
    images: list[dict] = [{} for _ in range(length)]
    for m, c in f.coeffs.items():
        for k in D.touching(m):
            if k < length:
                add_columns(images[k], D.column(k, m), c)
    return [ScalarTrigPoly(img) for img in images]


def sum_norms(
    D: MultiplierDecomposition,
    rows: Sequence[Sequence[float]] | np.ndarray,
    f: ScalarTrigPoly,
    grid: QuadratureGrid | None = None,
) -> np.ndarray:
    """
    ||sum_k a_k P_k f||_1 for every coefficient row a, on one fixed grid.

    Rows may be shorter than the decomposition; missing coefficients are 0.

    Returns:
        Array of norms, one per row
    """
    rows = np.asarray(rows, dtype=float)
    if rows.ndim == 1:
        rows = rows[None, :]
    length = rows.shape[1]
    if length > len(D):
        raise ValueError(f"{length} coefficients for a decomposition of {len(D)} pieces")
    images = piece_images(D, length, f)
    freqs = sorted({m for img in images for m in img.coeffs} | set(f.coeffs))
    if not freqs:
        return np.zeros(rows.shape[0])
    base = freqs[0]
    if grid is None:
        grid = QuadratureGrid.for_bandwidth(freqs[-1] - base)
    else:
        grid.require(freqs[-1] - base)
    position = {m: i for i, m in enumerate(freqs)}
    C = np.zeros((length, len(freqs)), dtype=complex)
    for k, img in enumerate(images):
        for m, c in img.coeffs.items():
            C[k, position[m]] = c
    weights = rows.astype(complex) @ C
    if len(freqs) <= DIRECT_EVALUATION_TERMS:
        return np.abs(weights @ node_phases([m - base for m in freqs], grid.M)).mean(axis=1)
    offsets = np.array([m - base for m in freqs], dtype=np.int64)
    norms = np.empty(rows.shape[0])
    for start in range(0, rows.shape[0], ROW_CHUNK):
        values = spectrum_values(offsets, weights[start:start + ROW_CHUNK], grid.M)
        norms[start:start + ROW_CHUNK] = np.abs(values).mean(axis=1)
    return norms
