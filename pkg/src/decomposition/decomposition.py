"""Ordered finite-rank decompositions and their support index."""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable

from src.decomposition.pieces import MultiplierPiece, Value


def add_columns(acc: dict[int, Value], column: dict[int, Value], weight=1) -> dict[int, Value]:
    """acc += weight * column, in place; exact zeros are dropped."""
    for out, v in column.items():
        total = acc.get(out, Fraction(0)) + weight * v
        if total == 0:
            acc.pop(out, None)
        else:
            acc[out] = total
    return acc


@dataclass(frozen=True)
class MultiplierDecomposition:
    """
    A finite sequence of pieces P_0, P_1, ... acting on frequencies.

    Pieces are looked up through their input-support bounds: when both the
    lower and upper bounds are nondecreasing in k (the dyadic case), the
    pieces touching e_m are found by bisection.
    """

    pieces: tuple[MultiplierPiece, ...]
    name: str = "decomposition"

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))

    def __len__(self) -> int:
        return len(self.pieces)

    @cached_property
    def _bounds(self) -> list[tuple[int, tuple[int, int]]]:
        return [(k, b) for k, piece in enumerate(self.pieces) if (b := piece.input_bounds()) is not None]

    @cached_property
    def _sorted_index(self) -> tuple[list[int], list[int], list[int]] | None:
        ks = [k for k, _ in self._bounds]
        los = [b[0] for _, b in self._bounds]
        his = [b[1] for _, b in self._bounds]
        if all(a <= b for a, b in zip(los, los[1:])) and all(a <= b for a, b in zip(his, his[1:])):
            return ks, los, his
        return None

    def touching(self, m: int) -> tuple[int, ...]:
        """Indices k whose input support bounds contain m, increasing."""
        index = self._sorted_index
        if index is None:
            return tuple(k for k, (lo, hi) in self._bounds if lo <= m <= hi)
        ks, los, his = index
        stop = bisect.bisect_right(los, m)
        start = bisect.bisect_left(his, m)
        return tuple(ks[start:stop])

    def overlapping(self, lo: int, hi: int | None = None) -> tuple[int, ...]:
        """Indices whose input support meets [lo, hi] (hi=None: unbounded)."""
        return tuple(k for k, (a, b) in self._bounds if b >= lo and (hi is None or a <= hi))

    def column(self, k: int, m: int) -> dict[int, Value]:
        return self.pieces[k].column(m)

    def column_sum(self, weight: Callable[[int], Value], m: int, indices: Iterable[int] | None = None) -> dict[int, Value]:
        """sum_k weight(k) P_k(e_m) over the touching pieces (optionally restricted)."""
        acc: dict[int, Value] = {}
        allowed = None if indices is None else set(indices)
        for k in self.touching(m):
            if allowed is not None and k not in allowed:
                continue
            w = weight(k)
            if w != 0:
                add_columns(acc, self.pieces[k].column(m), w)
        return acc

    def partial_sum(self, m: int, N: int) -> dict[int, Value]:
        """sum_{k <= N} P_k(e_m)."""
        acc: dict[int, Value] = {}
        for k in self.touching(m):
            if k > N:
                break
            add_columns(acc, self.pieces[k].column(m))
        return acc

    def completeness_index(self, m: int, tol: float = 0.0) -> int | None:
        """
        Smallest N with ||sum_{k <= N} P_k(e_m) - e_m||_{l^1} <= tol from N on.

        None when the pieces never restore e_m.
        """
        residual: dict[int, Value] = {m: Fraction(-1)}
        found = None
        for k in self.touching(m):
            add_columns(residual, self.pieces[k].column(m))
            if sum((abs(v) for v in residual.values()), Fraction(0)) <= tol:
                if found is None:
                    found = k
            else:
                found = None
        return found

    def breakpoints(self, indices: Iterable[int]) -> list[int]:
        points = set()
        for k in indices:
            points.update(self.pieces[k].breakpoints())
        return sorted(points)
