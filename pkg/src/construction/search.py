"""
Frequency and index searches of the construction.

All norms here are coefficient l^1 norms, computed from raw piece columns.
They are exact for diagonal pieces and upper bounds of the L^1 norm
otherwise, so any choice accepted here is admissible for the L^1 conditions.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from src.decomposition.decomposition import MultiplierDecomposition, add_columns
from src.decomposition.pieces import column_l1

logger = logging.getLogger(__name__)


class SearchCapExceeded(RuntimeError):
    pass


class HorizonExhausted(RuntimeError):
    pass


def admissible(value, threshold, strict: bool) -> bool:
    return value < threshold if strict else value <= threshold


def _first_in_segment(g: Callable[[int], object], lo: int, hi: int, ok: Callable[[object], bool]) -> int | None:
    """Smallest x in [lo, hi] with ok(g(x)), for g convex on [lo, hi]."""
    if ok(g(lo)):
        return lo
    # minimizer: first x whose forward difference is >= 0
    a, b = lo, hi
    while a < b:
        mid = (a + b) // 2
        if g(mid + 1) >= g(mid):
            b = mid
        else:
            a = mid + 1
    if not ok(g(a)):
        return None
    # g is nonincreasing on [lo, a]
    left, right = lo, a
    while left < right:
        mid = (left + right) // 2
        if ok(g(mid)):
            right = mid
        else:
            left = mid + 1
    return left


def first_admissible(
    g: Callable[[int], object],
    start: int,
    breakpoints: Iterable[int],
    threshold,
    *,
    strict: bool,
    cap: int,
) -> int:
    """
    Smallest integer x >= start with g(x) below the threshold.

    g must be convex on every run of integers strictly between consecutive
    breakpoints, and constant beyond the last one. Breakpoints are tested
    individually; each open run is resolved by a minimizer search followed
    by a bisection, so huge gaps cost only logarithmically many evaluations.

    Raises:
        SearchCapExceeded: nothing admissible in [start, start + cap]
    """
    ok = lambda v: admissible(v, threshold, strict)
    limit = start + cap
    points = sorted({b for b in breakpoints if b >= start})
    lo = start
    for p in points:
        if lo > limit:
            break
        if lo <= p - 1:
            x = _first_in_segment(g, lo, min(p - 1, limit), ok)
            if x is not None:
                return x
        if p > limit:
            break
        if ok(g(p)):
            return p
        lo = p + 1
    else:
        if lo <= limit and ok(g(lo)):
            return lo
    raise SearchCapExceeded(f"no admissible value in [{start}, {limit}]")


def _shifted_breakpoints(D: MultiplierDecomposition, indices: Sequence[int], shifts: Iterable[int], start: int) -> list[int]:
    """Breakpoints b - s of the given pieces, for every shift s, that are >= start."""
    index_set = set(indices)
    out = set()
    for s in shifts:
        for k in D.overlapping(start + s):
            if k in index_set:
                out.update(b - s for b in D.pieces[k].breakpoints() if b - s >= start)
    return sorted(out)


def find_tail_index(D: MultiplierDecomposition, frequencies: Iterable[int], top_index: int, delta, *, cap: int) -> int:
    """
    Smallest K > top_index with tail_bound(D, frequencies, K) <= delta.

    For each m the suffix sums sum_{t >= K} ||P_t(e_m)|| only change at
    indices of pieces touching m, so K_m is read off one backward pass.
    """
    K = top_index + 1
    for m in frequencies:
        touching = D.touching(m)
        suffix = Fraction(0)
        K_m = 0
        for t in reversed(touching):
            suffix += column_l1(D.column(t, m))
            if suffix > delta:
                K_m = t + 1
                break
        K = max(K, K_m)
    if K - top_index - 1 > cap:
        raise SearchCapExceeded(f"tail index {K} exceeds the search cap")
    return K


def choose_beta(
    D: MultiplierDecomposition,
    alpha: Sequence[int],
    beta_prev: int,
    K: int,
    delta,
    *,
    cap: int,
) -> int:
    """
    Smallest beta > beta_prev with sum_{k <= K} ||P_k(e_{beta + alpha_i})|| below
    delta for every alpha_i; this bounds ||sum_{k <= K} a_k P_k(e_{beta + alpha_i})||
    for every mask a at once.
    """
    indices = range(min(K, len(D) - 1) + 1)
    allowed = set(indices)

    def g(b: int):
        worst = Fraction(0)
        for a in alpha:
            m = a + b
            total = sum((column_l1(D.column(k, m)) for k in D.touching(m) if k in allowed), Fraction(0))
            worst = max(worst, total)
        return worst

    start = beta_prev + 1
    points = _shifted_breakpoints(D, indices, alpha, start)
    return first_admissible(g, start, points, delta, strict=delta > 0, cap=cap)


def completeness_residual(D: MultiplierDecomposition, m: int, N: int):
    """||sum_{k <= N} P_k(e_m) - e_m||_{l^1}."""
    return column_l1(add_columns(D.partial_sum(m, N), {m: Fraction(1)}, -1))


def choose_N(D: MultiplierDecomposition, alpha: Sequence[int], beta_new: int, K: int, delta) -> int:
    """
    Smallest N > K with completeness residual below delta at every
    alpha_i + beta_new. The residual only changes at touching indices.

    Raises:
        HorizonExhausted: no piece index of D achieves it
    """
    freqs = [a + beta_new for a in alpha]
    candidates = sorted({K + 1} | {k for m in freqs for k in D.touching(m) if k > K + 1})
    strict = delta > 0
    for N in candidates:
        if N >= len(D):
            break
        if all(admissible(completeness_residual(D, m, N), delta, strict) for m in freqs):
            return N
    raise HorizonExhausted(
        f"{len(D)} pieces do not restore frequencies up to {max(freqs)} (K={K})"
    )


def choose_alpha(
    D: MultiplierDecomposition,
    mask_indices: Sequence[int],
    beta: Sequence[int],
    alpha_prev: int,
    delta,
    *,
    cap: int,
) -> int:
    """Smallest alpha > alpha_prev with ||phi(e_{alpha + beta_j})|| <= delta for every beta_j."""
    allowed = set(mask_indices)
    weight = lambda k: 1 if k in allowed else 0

    def g(a: int):
        return max(column_l1(D.column_sum(weight, a + b)) for b in beta)

    start = alpha_prev + 1
    points = _shifted_breakpoints(D, sorted(allowed), beta, start)
    return first_admissible(g, start, points, delta, strict=False, cap=cap)
