"""
Independent re-verification of a construction state.

Conditions (i)/(ii) are re-measured at every level as true L^1 norms: phi_n
is rebuilt from the recorded mask intervals, its columns are read from each
piece whose own input bounds contain the frequency (a linear scan, not the
decomposition's support index), and the images are integrated by
quadrature. Nothing here goes through the stepper's coefficient bookkeeping.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from src.construction.state import ConstructionState
from src.decomposition.decomposition import MultiplierDecomposition, add_columns
from src.decomposition.pieces import Value
from src.decomposition.sums import CoefficientVector
from src.torus.fourier import ScalarTrigPoly
from src.torus.quadrature import l1_norm

logger = logging.getLogger(__name__)

CHECK_ATOL = 1e-9


@dataclass(frozen=True)
class LevelReport:
    level: int
    epsilon: float
    max_i: float
    max_ii: float

    @property
    def ok(self) -> bool:
        return max(self.max_i, self.max_ii) <= self.epsilon + CHECK_ATOL


@dataclass(frozen=True)
class VerificationReport:
    levels: tuple[LevelReport, ...]
    schedule_ok: bool
    mask_ok: bool
    problems: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return self.schedule_ok and self.mask_ok and all(r.ok for r in self.levels)

    @property
    def max_residual(self) -> float:
        return max((max(r.max_i, r.max_ii) for r in self.levels), default=0.0)


class _PieceColumns:
    """P_k(e_m) for every piece k whose input bounds contain m, cached per m."""

    def __init__(self, D: MultiplierDecomposition):
        self._pieces = [(k, piece, piece.input_bounds()) for k, piece in enumerate(D.pieces)]
        self._columns: dict[int, tuple[tuple[int, dict[int, Value]], ...]] = {}

    def __call__(self, m: int) -> tuple[tuple[int, dict[int, Value]], ...]:
        columns = self._columns.get(m)
        if columns is None:
            columns = tuple(
                (k, column) for k, piece, bounds in self._pieces
                if bounds is not None and bounds[0] <= m <= bounds[1] and (column := piece.column(m))
            )
            self._columns[m] = columns
        return columns


def _measure_level(
    columns: _PieceColumns,
    state: ConstructionState,
    level: int,
    norms: dict[tuple, float],
) -> LevelReport:
    active = set(CoefficientVector.from_intervals(state.mask[:level - 1]).support())
    alpha, beta = state.alpha[:level], state.beta[:level]
    max_i = max_ii = 0.0
    for i in range(level):
        for j in range(level):
            m = alpha[i] + beta[j]
            terms = tuple((k, column) for k, column in columns(m) if k in active)
            # the residual of a pair only changes when the mask reaches its pieces
            key = (m, tuple(k for k, _ in terms), j > i)
            value = norms.get(key)
            if value is None:
                image: dict[int, Value] = {}
                for _, column in terms:
                    add_columns(image, column)
                if j > i:
                    add_columns(image, {m: 1}, -1)
                value = norms[key] = l1_norm(ScalarTrigPoly(image))
            if j <= i:
                max_i = max(max_i, value)
            else:
                max_ii = max(max_ii, value)
    return LevelReport(level, float(state.epsilons[level - 1]), max_i, max_ii)


def _schedule_problems(state: ConstructionState) -> list[str]:
    problems = []
    eps = state.epsilons
    for n in range(1, len(eps)):
        bound = (1 + 2.0 ** -(n + 1)) * eps[n - 1]
        if eps[n] > bound * (1 + 1e-12):
            problems.append(f"eps_{n + 1}={eps[n]:.6e} exceeds (1+2^-{n + 1}) eps_{n}={bound:.6e}")
    if max(eps) >= state.config.eta:
        problems.append(f"max eps {max(eps):.6e} is not below eta={state.config.eta:.6e}")
    return problems


def _mask_problems(state: ConstructionState, pieces: int) -> list[str]:
    problems = []
    previous_end = -1
    for lo, hi in state.mask:
        if lo > hi:
            problems.append(f"empty interval [{lo}, {hi}]")
        if lo <= previous_end:
            problems.append(f"interval [{lo}, {hi}] overlaps an earlier one")
        if hi >= pieces:
            problems.append(f"interval [{lo}, {hi}] runs past the last piece {pieces - 1}")
        previous_end = max(previous_end, hi)
    return problems


def _frequency_problems(state: ConstructionState) -> list[str]:
    problems = []
    for name, values in (("alpha", state.alpha), ("beta", state.beta)):
        if values[0] != 0:
            problems.append(f"{name}_1 must be 0")
        if any(b <= a for a, b in zip(values, values[1:])):
            problems.append(f"{name} is not increasing")
    return problems


def verify_state(
    D: MultiplierDecomposition,
    state: ConstructionState,
    levels: list[int] | None = None,
) -> VerificationReport:
    """
    Re-measure (i)/(ii) at the given levels and check the recorded schedule
    and mask shape.

    Args:
        D: Decomposition the state was built for
        state: State to check
        levels: Levels to re-measure (default: every level)

    Returns:
        VerificationReport
    """
    if levels is None:
        levels = list(range(1, state.level + 1))
    schedule = _schedule_problems(state)
    mask = _mask_problems(state, len(D)) + _frequency_problems(state)
    columns, norms = _PieceColumns(D), {}
    reports = () if mask else tuple(_measure_level(columns, state, n, norms) for n in levels)
    problems = schedule + mask + [
        f"level {r.level}: residual {max(r.max_i, r.max_ii):.6e} exceeds eps={r.epsilon:.6e}"
        for r in reports if not r.ok
    ]
    for problem in problems:
        logger.warning("verification: %s", problem)
    return VerificationReport(reports, not schedule, not mask, tuple(problems))
