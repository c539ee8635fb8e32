"""
Finite-rank frequency-domain pieces P_k.

A piece acts on e_m by returning its column at m: a finite map from output
frequency to value. Values are exact Fractions where the profile is
rational and complex otherwise. Every piece also reports the bounds of its
input support and its breakpoints: between two consecutive breakpoints the
column is affine in m, which the construction searches rely on.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Protocol, Union

Value = Union[Fraction, complex]


def _clean(value) -> Value:
    """Integers and rationals stay exact, everything else becomes complex."""
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    return complex(value)


class MultiplierPiece(Protocol):
    def column(self, m: int) -> dict[int, Value]: ...

    def input_bounds(self) -> tuple[int, int] | None: ...

    def breakpoints(self) -> tuple[int, ...]: ...


@dataclass(frozen=True)
class DiagonalPiece:
    """P(e_m) = values[m] e_m for m in the finite support."""

    values: dict[int, Value] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {int(m): _clean(v) for m, v in self.values.items() if v != 0}
        object.__setattr__(self, "values", dict(sorted(cleaned.items())))

    def value(self, m: int) -> Value:
        return self.values.get(m, Fraction(0))

    def column(self, m: int) -> dict[int, Value]:
        v = self.values.get(m)
        return {m: v} if v is not None else {}

    def input_bounds(self) -> tuple[int, int] | None:
        if not self.values:
            return None
        keys = list(self.values)
        return keys[0], keys[-1]

    def breakpoints(self) -> tuple[int, ...]:
        return tuple(self.values)


@dataclass(frozen=True)
class TrapezoidPiece:
    """
    Diagonal multiplier with a piecewise-linear profile.

    nodes are (frequency, value) pairs with strictly increasing frequencies;
    the profile interpolates linearly between nodes and vanishes outside
    [first node, last node].
    """

    nodes: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        nodes = tuple((int(m), Fraction(v)) for m, v in self.nodes)
        if not nodes:
            raise ValueError("a trapezoid needs at least one node")
        if any(b[0] <= a[0] for a, b in zip(nodes, nodes[1:])):
            raise ValueError("trapezoid node frequencies must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)

    def value(self, m: int) -> Fraction:
        nodes = self.nodes
        if m < nodes[0][0] or m > nodes[-1][0]:
            return Fraction(0)
        for (m0, v0), (m1, v1) in zip(nodes, nodes[1:]):
            if m0 <= m <= m1:
                return v0 + (v1 - v0) * Fraction(m - m0, m1 - m0)
        return nodes[0][1]

    def column(self, m: int) -> dict[int, Value]:
        v = self.value(m)
        return {m: v} if v != 0 else {}

    def input_bounds(self) -> tuple[int, int]:
        return self.nodes[0][0], self.nodes[-1][0]

    def breakpoints(self) -> tuple[int, ...]:
        return tuple(m for m, _ in self.nodes)


@dataclass(frozen=True)
class KernelPiece:
    """P(e_m) = sum_{m'} kernel[(m', m)] e_{m'} for a finite kernel."""

    kernel: dict[tuple[int, int], Value] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {(int(o), int(i)): _clean(v) for (o, i), v in self.kernel.items() if v != 0}
        object.__setattr__(self, "kernel", dict(sorted(cleaned.items(), key=lambda kv: (kv[0][1], kv[0][0]))))

    def column(self, m: int) -> dict[int, Value]:
        return {o: v for (o, i), v in self.kernel.items() if i == m}

    def input_bounds(self) -> tuple[int, int] | None:
        if not self.kernel:
            return None
        inputs = [i for _, i in self.kernel]
        return min(inputs), max(inputs)

    def breakpoints(self) -> tuple[int, ...]:
        return tuple(sorted({i for _, i in self.kernel}))


def column_l1(column: dict[int, Value]) -> Fraction | float:
    """Coefficient l^1 norm of a column; an upper bound for its L^1 norm."""
    return sum((abs(v) for v in column.values()), Fraction(0))
