"""
Trigonometric polynomials on the torus.

Frequencies are Python integers of any size: the constructions that use
these polynomials place coefficients at frequencies far beyond the range of
machine integers, so phases are always reduced exactly before they reach
floating point.
"""
from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

# polynomials with more terms are evaluated on grids by FFT
DIRECT_EVALUATION_TERMS = 64


def _phase(m: int, t) -> complex:
    """e^{2 pi i m t}, with m*t reduced modulo 1 in rational arithmetic."""
    frac = (m * Fraction(t)) % 1
    return cmath.exp(2j * math.pi * float(frac))


@dataclass(frozen=True)
class ScalarTrigPoly:
    """Finitely supported Fourier series sum_m coeffs[m] e_m."""

    coeffs: dict[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {int(m): complex(c) for m, c in self.coeffs.items() if c != 0}
        object.__setattr__(self, "coeffs", cleaned)

    @classmethod
    def zero(cls) -> ScalarTrigPoly:
        return cls({})

    @classmethod
    def monomial(cls, m: int, c: complex = 1) -> ScalarTrigPoly:
        """c * e_m."""
        return cls({m: c})

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other: ScalarTrigPoly) -> ScalarTrigPoly:
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return ScalarTrigPoly(out)

    def __sub__(self, other: ScalarTrigPoly) -> ScalarTrigPoly:
        return self + other.scale(-1)

    def scale(self, c: complex) -> ScalarTrigPoly:
        return ScalarTrigPoly({m: c * v for m, v in self.coeffs.items()})

    def __mul__(self, c: complex) -> ScalarTrigPoly:
        return self.scale(c)

    __rmul__ = __mul__

    def shift(self, k: int) -> ScalarTrigPoly:
        """Multiply by e_k."""
        return ScalarTrigPoly({m + k: c for m, c in self.coeffs.items()})

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.coeffs))

    @property
    def bandwidth(self) -> int:
        """max - min frequency; 0 for the zero polynomial."""
        if not self.coeffs:
            return 0
        return max(self.coeffs) - min(self.coeffs)

    @property
    def is_analytic(self) -> bool:
        """True when no negative frequency is present (membership in H^1)."""
        return all(m >= 0 for m in self.coeffs)

    def coefficient(self, m: int) -> complex:
        return self.coeffs.get(m, 0j)

    def normalized(self) -> ScalarTrigPoly:
        """Shift so that the lowest frequency is 0; |p| is unchanged."""
        if not self.coeffs:
            return self
        return self.shift(-min(self.coeffs))


@dataclass(frozen=True)
class MatrixTrigPoly:
    """
    d x d matrix-valued trigonometric polynomial, stored entrywise.

    Entry (i, j) is a ScalarTrigPoly; absent entries are zero. The
    coefficient at frequency m is the d x d matrix returned by
    ``coefficient(m)``.
    """

    d: int
    entries: dict[tuple[int, int], ScalarTrigPoly] = field(default_factory=dict)

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"matrix size must be positive, got {self.d}")
        cleaned = {}
        for (i, j), p in self.entries.items():
            if not (0 <= i < self.d and 0 <= j < self.d):
                raise ValueError(f"entry ({i}, {j}) outside a {self.d}x{self.d} matrix")
            if p:
                cleaned[(int(i), int(j))] = p
        object.__setattr__(self, "entries", cleaned)

    @classmethod
    def from_constant(cls, X: np.ndarray) -> MatrixTrigPoly:
        X = np.asarray(X, dtype=complex)
        d = X.shape[0]
        return cls(d, {(i, j): ScalarTrigPoly.monomial(0, X[i, j])
                       for i in range(d) for j in range(d) if X[i, j] != 0})

    @classmethod
    def from_coefficients(cls, d: int, coeffs: dict[int, np.ndarray]) -> MatrixTrigPoly:
        acc: dict[tuple[int, int], dict[int, complex]] = {}
        for m, C in coeffs.items():
            C = np.asarray(C, dtype=complex)
            if C.shape != (d, d):
                raise ValueError(f"coefficient at frequency {m} has shape {C.shape}, expected {(d, d)}")
            for i, j in zip(*np.nonzero(C)):
                acc.setdefault((int(i), int(j)), {})[m] = C[i, j]
        return cls(d, {ij: ScalarTrigPoly(c) for ij, c in acc.items()})

    def __bool__(self) -> bool:
        return bool(self.entries)

    def entry(self, i: int, j: int) -> ScalarTrigPoly:
        return self.entries.get((i, j), ScalarTrigPoly.zero())

    @property
    def frequencies(self) -> tuple[int, ...]:
        freqs = set()
        for p in self.entries.values():
            freqs.update(p.coeffs)
        return tuple(sorted(freqs))

    def coefficient(self, m: int) -> np.ndarray:
        C = np.zeros((self.d, self.d), dtype=complex)
        for (i, j), p in self.entries.items():
            C[i, j] = p.coefficient(m)
        return C

    @property
    def is_analytic(self) -> bool:
        return all(p.is_analytic for p in self.entries.values())

    def modulate(self, rows: list[int], cols: list[int]) -> MatrixTrigPoly:
        """diag(e_rows) F diag(e_cols); a pointwise unitary conjugation."""
        return MatrixTrigPoly(self.d, {(i, j): p.shift(rows[i] + cols[j])
                                       for (i, j), p in self.entries.items()})

    def modulation_potentials(self) -> tuple[list[int], list[int]]:
        """
        Row/column frequencies r, c with min-frequency(F_ij) ~ r_i + c_j.

        Walks the bipartite graph of nonzero entries breadth-first; on every
        spanning-tree edge the relation holds exactly, so an element of the
        form diag(e_a) X diag(e_b) is demodulated to a constant.
        """
        d = self.d
        row_adj: list[list[int]] = [[] for _ in range(d)]
        col_adj: list[list[int]] = [[] for _ in range(d)]
        base = {}
        for (i, j) in sorted(self.entries):
            base[(i, j)] = min(self.entries[(i, j)].coeffs)
            row_adj[i].append(j)
            col_adj[j].append(i)
        rows: list[int | None] = [None] * d
        cols: list[int | None] = [None] * d
        for start in range(d):
            if rows[start] is not None or not row_adj[start]:
                continue
            rows[start] = 0
            queue = deque([("row", start)])
            while queue:
                side, k = queue.popleft()
                if side == "row":
                    for j in row_adj[k]:
                        if cols[j] is None:
                            cols[j] = base[(k, j)] - rows[k]
                            queue.append(("col", j))
                else:
                    for i in col_adj[k]:
                        if rows[i] is None:
                            rows[i] = base[(i, k)] - cols[k]
                            queue.append(("row", i))
        return ([r or 0 for r in rows], [c or 0 for c in cols])

    def balanced(self) -> MatrixTrigPoly:
        """Demodulated copy with the same pointwise trace norms."""
        rows, cols = self.modulation_potentials()
        return self.modulate([-r for r in rows], [-c for c in cols])

    @property
    def bandwidth(self) -> int:
        freqs = self.frequencies
        if not freqs:
            return 0
        return freqs[-1] - freqs[0]


def evaluate(p: ScalarTrigPoly | MatrixTrigPoly, t) -> complex | np.ndarray:
    """
    Evaluate sum_m coeff(m) e^{2 pi i m t}.

    Args:
        p: Scalar or matrix polynomial
        t: Point of [0, 1), float or Fraction

    Returns:
        Complex value, or a d x d complex matrix
    """
    if isinstance(p, MatrixTrigPoly):
        out = np.zeros((p.d, p.d), dtype=complex)
        for (i, j), entry in p.entries.items():
            out[i, j] = evaluate(entry, t)
        return out
    return sum((c * _phase(m, t) for m, c in p.coeffs.items()), 0j)


def node_phases(freqs: list[int], M: int) -> np.ndarray:
    """Matrix of e_m(j/M), shape (len(freqs), M), with exact integer reduction."""
    residues = np.array([m % M for m in freqs], dtype=np.int64)
    j = np.arange(M, dtype=np.int64)
    exponents = (residues[:, None] * j[None, :]) % M
    return np.exp(2j * np.pi * exponents / M)


def spectrum_values(residues: np.ndarray, coeffs: np.ndarray, M: int) -> np.ndarray:
    """
    sum_m c_m e_m(j/M) for j = 0..M-1 by one inverse FFT.

    residues are the frequencies reduced modulo M; coeffs may carry leading
    batch axes, one set of values per batch entry.
    """
    spectrum = np.zeros(coeffs.shape[:-1] + (M,), dtype=complex)
    np.add.at(np.moveaxis(spectrum, -1, 0), residues, np.moveaxis(coeffs, -1, 0))
    return np.fft.ifft(spectrum, axis=-1) * M


def node_values(p: ScalarTrigPoly, M: int) -> np.ndarray:
    """p(j/M) for j = 0..M-1; dense polynomials go through the FFT."""
    if not p.coeffs:
        return np.zeros(M, dtype=complex)
    freqs = list(p.coeffs)
    coeffs = np.array([p.coeffs[m] for m in freqs], dtype=complex)
    if len(freqs) <= DIRECT_EVALUATION_TERMS:
        return coeffs @ node_phases(freqs, M)
    return spectrum_values(np.array([m % M for m in freqs], dtype=np.int64), coeffs, M)


def matrix_node_values(F: MatrixTrigPoly, M: int) -> np.ndarray:
    """F(j/M) for j = 0..M-1, shape (M, d, d)."""
    d = F.d
    flat, freqs, coeffs = [], [], []
    for (i, j), p in F.entries.items():
        for m, c in p.coeffs.items():
            flat.append(i * d + j)
            freqs.append(m)
            coeffs.append(c)
    acc = np.zeros((d * d, M), dtype=complex)
    if freqs:
        values = np.asarray(coeffs, dtype=complex)[:, None] * node_phases(freqs, M)
        np.add.at(acc, np.asarray(flat), values)
    return acc.T.reshape(M, d, d)


def fejer_kernel(n: int) -> ScalarTrigPoly:
    """Analytic Fejer kernel e_n F_n: coefficients 1 - |k - n|/(n + 1) on [0, 2n]."""
    return ScalarTrigPoly({k: 1 - abs(k - n) / (n + 1) for k in range(2 * n + 1)})


def vallee_poussin_kernel(n: int) -> ScalarTrigPoly:
    """Analytic de la Vallee-Poussin kernel e_{2n}(2F_{2n} - F_n)."""
    coeffs = {}
    for k in range(-2 * n, 2 * n + 1):
        c = 2 * (1 - abs(k) / (2 * n + 1)) - (1 - abs(k) / (n + 1) if abs(k) <= n else 0)
        coeffs[k + 2 * n] = c
    return ScalarTrigPoly(coeffs)


def random_analytic_poly(degree: int, rng: np.random.Generator) -> ScalarTrigPoly:
    """Complex Gaussian coefficients on frequencies 0..degree."""
    c = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
    return ScalarTrigPoly({k: c[k] for k in range(degree + 1)})
