"""Concrete decompositions of the identity on H^1."""
from __future__ import annotations

from fractions import Fraction

from src.decomposition.decomposition import MultiplierDecomposition
from src.decomposition.pieces import DiagonalPiece, TrapezoidPiece
from src.seeding import task_rng


def stein_piece(n: int) -> TrapezoidPiece:
    """
    The n-th de la Vallee-Poussin multiplier.

    W_0 is 1 at 0 and 1 and vanishes from 2 on; W_n (n >= 1) rises linearly
    from 0 at 2^(n-1) to 1 at 2^n and falls back to 0 at 2^(n+1).
    """
    if n < 0:
        raise ValueError(f"piece index must be non-negative, got {n}")
    if n == 0:
        return TrapezoidPiece(((0, Fraction(1)), (1, Fraction(1)), (2, Fraction(0))))
    return TrapezoidPiece(((2 ** (n - 1), Fraction(0)), (2**n, Fraction(1)), (2 ** (n + 1), Fraction(0))))


def stein(N: int) -> MultiplierDecomposition:
    """W_0, ..., W_N; a partition of unity on frequencies [0, 2^N]."""
    if N < 1:
        raise ValueError(f"need at least one dyadic piece, got N={N}")
    return MultiplierDecomposition(tuple(stein_piece(n) for n in range(N + 1)), name=f"stein-{N}")


def basis_decomposition(N: int) -> MultiplierDecomposition:
    """Projections onto e_0, ..., e_N: the decomposition given by the exponential basis."""
    if N < 0:
        raise ValueError(f"N must be non-negative, got {N}")
    return MultiplierDecomposition(tuple(DiagonalPiece({k: Fraction(1)}) for k in range(N + 1)), name=f"basis-{N}")


def identity_decomposition(horizon: int) -> MultiplierDecomposition:
    """A single piece acting as the identity on [0, horizon]."""
    if horizon < 0:
        raise ValueError(f"horizon must be non-negative, got {horizon}")
    nodes = ((0, Fraction(1)),) if horizon == 0 else ((0, Fraction(1)), (horizon, Fraction(1)))
    return MultiplierDecomposition((TrapezoidPiece(nodes),), name=f"identity-{horizon}")


def random_partition_decomposition(N: int, seed: int = 0) -> MultiplierDecomposition:
    """
    Hat functions on random increasing centers c_0 = 0 < c_1 < ... < c_N,
    with c_n drawn in [2^n, 3 * 2^(n-1)). Piece n peaks at c_n; the family is
    an exact partition of unity on [0, c_N].
    """
    if N < 1:
        raise ValueError(f"need at least one piece beyond the first, got N={N}")
    rng = task_rng(seed, "partition", N)
    centers = [0] + [2**n + int(rng.random() * 2 ** (n - 1)) for n in range(1, N + 1)]
    pieces = []
    for n, c in enumerate(centers):
        nodes = []
        if n > 0:
            nodes.append((centers[n - 1], Fraction(0)))
        nodes.append((c, Fraction(1)))
        if n < N:
            nodes.append((centers[n + 1], Fraction(0)))
        pieces.append(TrapezoidPiece(tuple(nodes)))
    return MultiplierDecomposition(tuple(pieces), name=f"random-partition-{N}-{seed}")
