"""Candidate extremal matrices for the triangular projection."""
from __future__ import annotations

import numpy as np

from src.schatten.truncation import triangular_truncation
from src.seeding import task_rng


def cauchy_witness(d: int) -> np.ndarray:
    """x_ij = 1/(j - i) off the diagonal, 0 on it."""
    i, j = np.indices((d, d))
    diff = (j - i).astype(float)
    with np.errstate(divide="ignore"):
        X = np.where(diff != 0, 1.0 / np.where(diff != 0, diff, 1.0), 0.0)
    return X.astype(complex)


def strict_upper_cauchy(d: int) -> np.ndarray:
    return triangular_truncation(cauchy_witness(d)).entries.copy()


def gaussian_witness(d: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def elementary(d: int, i: int, j: int) -> np.ndarray:
    E = np.zeros((d, d), dtype=complex)
    E[i, j] = 1
    return E


def rank_one_probes(d: int) -> list[tuple[str, np.ndarray]]:
    """Elementary matrices, the all-ones matrix and a Fourier rank-one matrix."""
    k = np.arange(d)
    fourier = np.exp(2j * np.pi * k / d)
    probes = [("ones", np.ones((d, d), dtype=complex)),
              ("fourier", np.outer(fourier, fourier.conj()))]
    if d >= 2:
        probes.insert(0, ("e12", elementary(d, 0, 1)))
        probes.insert(1, ("corner", elementary(d, 0, d - 1)))
    else:
        probes.insert(0, ("e11", elementary(d, 0, 0)))
    return probes


def witness_library(d: int, seed: int = 0, gaussians: int = 2) -> list[tuple[str, np.ndarray]]:
    """
    Tagged witnesses: Cauchy matrix, its strict-upper part, rank-one probes
    and seeded Gaussian matrices. Zero matrices are left out.
    """
    library = [("cauchy", cauchy_witness(d)), ("cauchy-upper", strict_upper_cauchy(d))]
    library += rank_one_probes(d)
    for k in range(gaussians):
        library.append((f"gaussian-{k}", gaussian_witness(d, task_rng(seed, "gaussian", d, k))))
    return [(tag, X) for tag, X in library if np.any(X != 0)]
