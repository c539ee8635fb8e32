"""Immutable snapshots of the construction."""
from __future__ import annotations

from dataclasses import dataclass, replace

from src.construction.schedule import ScheduleConfig
from src.decomposition.sums import CoefficientVector


@dataclass(frozen=True)
class ConstructionState:
    """
    Level-n data: frequencies alpha_1..alpha_n and beta_1..beta_n, the mask
    phi_n as a list of closed index intervals, and eps_1..eps_n.

    mask[k] is the interval [K, N] added on the way to level k + 2;
    measured[k] is the largest residual found when level k + 1 was checked.
    """

    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    mask: tuple[tuple[int, int], ...]
    epsilons: tuple[float, ...]
    measured: tuple[float, ...]
    config: ScheduleConfig

    @classmethod
    def initial(cls, config: ScheduleConfig) -> ConstructionState:
        """alpha_1 = beta_1 = 0 and phi_1 = 0."""
        return cls((0,), (0,), (), (config.epsilon1,), (0.0,), config)

    @property
    def level(self) -> int:
        return len(self.alpha)

    @property
    def epsilon(self) -> float:
        return self.epsilons[-1]

    @property
    def top_index(self) -> int:
        """Largest index in the mask; -1 for the empty mask."""
        return max((hi for _, hi in self.mask), default=-1)

    @property
    def K(self) -> int | None:
        return self.mask[-1][0] if self.mask else None

    @property
    def N(self) -> int | None:
        return self.mask[-1][1] if self.mask else None

    def mask_indices(self) -> tuple[int, ...]:
        return tuple(k for lo, hi in self.mask for k in range(lo, hi + 1))

    def coefficients(self) -> CoefficientVector:
        return CoefficientVector.from_intervals(self.mask)

    def tracked_frequencies(self) -> set[int]:
        return {a + b for a in self.alpha for b in self.beta}

    def extended(self, alpha: int, beta: int, interval: tuple[int, int], epsilon: float, measured: float) -> ConstructionState:
        return replace(
            self,
            alpha=self.alpha + (alpha,),
            beta=self.beta + (beta,),
            mask=self.mask + (interval,),
            epsilons=self.epsilons + (epsilon,),
            measured=self.measured + (measured,),
        )

    def truncated(self, level: int) -> ConstructionState:
        """The snapshot at an earlier level."""
        if not 1 <= level <= self.level:
            raise ValueError(f"level must lie in [1, {self.level}], got {level}")
        return replace(
            self,
            alpha=self.alpha[:level],
            beta=self.beta[:level],
            mask=self.mask[:level - 1],
            epsilons=self.epsilons[:level],
            measured=self.measured[:level],
        )
