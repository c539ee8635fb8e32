"""
The inductive construction of alpha, beta and the mask phi.

From level n to n + 1:
  K   tail index: pieces from K on move no tracked e_{alpha_i + beta_j} by more than delta
  beta_{n+1}: pieces up to K are below delta on e_{alpha_i + beta}
  N   completeness: pieces up to N restore every e_{alpha_i + beta_{n+1}} within delta
  phi_{n+1} = phi_n + sum_{k=K}^{N} P_k
  alpha_{n+1}: phi_{n+1} is below delta on every e_{alpha + beta_j}
"""
from __future__ import annotations

import logging
from dataclasses import replace
from fractions import Fraction

from src.construction.schedule import ScheduleConfig
from src.construction.search import (
    HorizonExhausted,
    choose_alpha,
    choose_beta,
    choose_N,
    find_tail_index,
)
from src.construction.state import ConstructionState
from src.decomposition.decomposition import MultiplierDecomposition, add_columns
from src.decomposition.pieces import column_l1
from src.decomposition.stein import stein

logger = logging.getLogger(__name__)

# float round-off allowed when comparing a measured residual with eps_n
RESIDUAL_ATOL = 1e-12


class ConstructionError(RuntimeError):
    pass


def level_residuals(D: MultiplierDecomposition, state: ConstructionState) -> tuple[Fraction | float, Fraction | float]:
    """
    Largest coefficient residuals of conditions (i) and (ii) at the state's level:
    (i)  ||phi(e_{alpha_i + beta_j})|| for j <= i
    (ii) ||phi(e_{alpha_i + beta_j}) - e_{alpha_i + beta_j}|| for i < j
    """
    allowed = set(state.mask_indices())
    weight = lambda k: 1 if k in allowed else 0
    worst_i = worst_ii = Fraction(0)
    for i, a in enumerate(state.alpha):
        for j, b in enumerate(state.beta):
            m = a + b
            image = D.column_sum(weight, m)
            if j <= i:
                worst_i = max(worst_i, column_l1(image))
            else:
                worst_ii = max(worst_ii, column_l1(add_columns(image, {m: Fraction(1)}, -1)))
    return worst_i, worst_ii


def _checked(D: MultiplierDecomposition, state: ConstructionState) -> ConstructionState:
    worst = max(level_residuals(D, state))
    if worst > state.epsilon + RESIDUAL_ATOL:
        raise ConstructionError(
            f"level {state.level}: residual {float(worst):.3e} exceeds eps={state.epsilon:.3e}"
        )
    return replace(state, measured=state.measured[:-1] + (float(worst),))


def step(D: MultiplierDecomposition, state: ConstructionState) -> ConstructionState:
    """
    Extend a level-n state to level n + 1 and verify (i)/(ii) at every pair.

    Raises:
        SearchCapExceeded: a frequency search hit the cap
        HorizonExhausted: the decomposition is too short
        ConstructionError: the new level violates (i)/(ii)
    """
    config = state.config
    n = state.level
    delta = config.delta(n, state.epsilon)
    K = find_tail_index(D, state.tracked_frequencies(), state.top_index, delta, cap=config.search_cap)
    beta = choose_beta(D, state.alpha, state.beta[-1], K, delta, cap=config.search_cap)
    N = choose_N(D, state.alpha, beta, K, delta)
    mask_indices = state.mask_indices() + tuple(range(K, N + 1))
    alpha = choose_alpha(D, mask_indices, state.beta + (beta,), state.alpha[-1], delta, cap=config.search_cap)
    epsilon = 0.0 if config.exact else config.next_epsilon(state.epsilon, delta)
    logger.debug("level %d: K=%d N=%d delta=%.3e", n + 1, K, N, delta)
    return _checked(D, state.extended(alpha, beta, (K, N), epsilon, 0.0))


def run_construction(D: MultiplierDecomposition, config: ScheduleConfig) -> ConstructionState:
    """Iterate step from the initial state until `config.steps` levels exist."""
    state = ConstructionState.initial(config)
    while state.level < config.steps:
        state = step(D, state)
        logger.info("level %d: K=%d N=%d eps=%.3e", state.level, state.K, state.N, state.epsilon)
    return state


def _top_touching(D: MultiplierDecomposition, frequencies) -> int:
    """Largest index of a piece acting nontrivially on one of the frequencies; -1 if none."""
    top = -1
    for m in frequencies:
        for k in D.touching(m):
            if k > top and D.column(k, m):
                top = k
    return top


def _support_end(D: MultiplierDecomposition, indices) -> int:
    return max((D.pieces[k].input_bounds()[1] for k in indices if D.pieces[k].input_bounds() is not None), default=-1)


def place_exactly(D: MultiplierDecomposition, steps: int) -> ConstructionState:
    """
    Exact-mode construction placing every frequency past the relevant supports.

    Works for decompositions whose values form an exact partition of unity
    (Stein): K is one past the last piece touching a tracked frequency,
    beta and alpha are one past the supports of the pieces they must avoid,
    and N is the largest completeness index. Every level is then checked
    with eps = 0.
    """
    config = ScheduleConfig(steps=steps, mode="exact")
    state = ConstructionState.initial(config)
    while state.level < steps:
        K = max(state.top_index, _top_touching(D, state.tracked_frequencies())) + 1
        beta = max(state.beta[-1], _support_end(D, range(min(K + 1, len(D))))) + 1
        completeness = [D.completeness_index(a + beta) for a in state.alpha]
        if any(c is None for c in completeness):
            raise HorizonExhausted(f"{len(D)} pieces do not restore frequencies up to {max(state.alpha) + beta}")
        N = max([K + 1, *completeness])
        if N >= len(D):
            raise HorizonExhausted(f"placement needs piece {N}, decomposition has {len(D)}")
        mask_indices = state.mask_indices() + tuple(range(K, N + 1))
        alpha = max(state.alpha[-1], _support_end(D, mask_indices)) + 1
        state = _checked(D, state.extended(alpha, beta, (K, N), 0.0, 0.0))
    return state


def default_stein(steps: int) -> MultiplierDecomposition:
    """A Stein decomposition long enough for `steps` levels of either mode."""
    return stein(8 * steps + 16)
