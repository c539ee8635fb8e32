"""The delta / epsilon bookkeeping of the construction."""
from __future__ import annotations

from dataclasses import dataclass

DEFAULT_ETA = 1e-3
DEFAULT_SEARCH_CAP = 2**31
# prod_{k >= 2} (1 + 2^-k) < 2.4, so eps_1 = eta / 2.4 keeps every eps_n below eta
EPSILON1_DIVISOR = 2.4
MODES = ("exact", "scan")


@dataclass(frozen=True)
class ScheduleConfig:
    """
    Parameters of a construction run.

    In scan mode delta_{n+1} = eps_n 2^-(n+1) / 3 and eps_{n+1} =
    max(3 delta, eps_n + delta). In exact mode every threshold is 0 and
    frequencies are only accepted where the multiplier values are exactly
    0 or 1.
    """

    eta: float = DEFAULT_ETA
    steps: int = 8
    mode: str = "scan"
    epsilon1: float | None = None
    search_cap: int = DEFAULT_SEARCH_CAP

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if self.search_cap < 1:
            raise ValueError(f"search cap must be >= 1, got {self.search_cap}")
        if self.epsilon1 is None:
            object.__setattr__(self, "epsilon1", 0.0 if self.mode == "exact" else self.eta / EPSILON1_DIVISOR)
        if not 0 <= self.epsilon1 < self.eta:
            raise ValueError(f"epsilon1 must lie in [0, eta), got {self.epsilon1}")
        if self.mode == "scan" and self.epsilon1 == 0:
            raise ValueError("scan mode needs a positive epsilon1")

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    def delta(self, n: int, epsilon_n: float) -> float:
        """Threshold used while extending level n to level n + 1."""
        if self.exact:
            return 0.0
        return epsilon_n * 2.0 ** -(n + 1) / 3

    def next_epsilon(self, epsilon_n: float, delta: float) -> float:
        return max(3 * delta, epsilon_n + delta)


def growth_bound(n: int, epsilon_n: float) -> float:
    """(1 + 2^-(n+1)) eps_n, the largest allowed eps_{n+1}."""
    return (1 + 2.0 ** -(n + 1)) * epsilon_n
