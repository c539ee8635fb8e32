"""Tests for the frequency-selection construction, its checker and certificates."""
import math
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

from src.construction.certify import (
    TransferInequalityViolated,
    certify,
    strategy_witness,
    sweep,
    transfer_element,
)
from src.construction.checker import verify_state
from src.construction.codec import (
    certificate_from_document,
    certificate_to_document,
    state_from_document,
    state_to_document,
)
from src.construction.schedule import EPSILON1_DIVISOR, ScheduleConfig, growth_bound
from src.construction.search import (
    HorizonExhausted,
    SearchCapExceeded,
    choose_beta,
    choose_N,
    completeness_residual,
    find_tail_index,
    first_admissible,
)
from src.construction.state import ConstructionState
from src.construction.stepper import default_stein, level_residuals, place_exactly, run_construction, step
from src.decomposition.decomposition import MultiplierDecomposition
from src.decomposition.pieces import KernelPiece
from src.decomposition.probe import unconditionality_probe
from src.decomposition.stein import basis_decomposition, random_partition_decomposition, stein
from src.jsonio import dumps, loads
from src.schatten.growth import estimate_triangular_norms, log_slope, triangular_map
from src.schatten.norms import trace_norm
from src.schatten.truncation import triangular_truncation
from src.schatten.witnesses import cauchy_witness, elementary
from src.torus.quadrature import h1_matrix_norm


class _BlindIndex(MultiplierDecomposition):
    """A decomposition whose support index finds no pieces."""

    def touching(self, m: int) -> tuple[int, ...]:
        return ()


def _shifted_kernel_decomposition(N: int) -> MultiplierDecomposition:
    """P_k(e_k) = e_k + e_{k+1}/2 and P_{k+1}(e_k) = -e_{k+1}/2: off-diagonal kernels summing to the identity."""
    pieces = []
    for k in range(N + 1):
        kernel = {(k, k): Fraction(1)}
        if k < N:
            kernel[(k + 1, k)] = Fraction(1, 2)
        if k > 0:
            kernel[(k, k - 1)] = Fraction(-1, 2)
        pieces.append(KernelPiece(kernel))
    return MultiplierDecomposition(tuple(pieces), name=f"shifted-kernel-{N}")


class TestSchedule:
    def test_scan_default_epsilon1(self):
        config = ScheduleConfig(eta=1e-3)
        assert config.epsilon1 == pytest.approx(1e-3 / EPSILON1_DIVISOR)

    def test_exact_thresholds_vanish(self):
        config = ScheduleConfig(mode="exact")
        assert config.epsilon1 == 0
        assert config.delta(3, 0.0) == 0

    def test_next_epsilon_within_growth_bound(self):
        config = ScheduleConfig(eta=1e-3)
        eps = config.epsilon1
        for n in range(1, 10):
            nxt = config.next_epsilon(eps, config.delta(n, eps))
            assert nxt <= growth_bound(n, eps)
            eps = nxt

    @pytest.mark.parametrize("kwargs", [
        {"mode": "fast"},
        {"eta": 0},
        {"steps": 0},
        {"epsilon1": 1.0},
        {"mode": "scan", "epsilon1": 0.0},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            ScheduleConfig(**kwargs)


class TestState:
    def test_initial(self):
        state = ConstructionState.initial(ScheduleConfig(mode="exact"))
        assert state.level == 1
        assert state.alpha == (0,) and state.beta == (0,)
        assert state.mask == ()
        assert state.top_index == -1
        assert state.K is None
        assert state.coefficients().support() == ()

    def test_extend_and_truncate(self):
        state = ConstructionState.initial(ScheduleConfig(mode="exact"))
        longer = state.extended(8, 4, (1, 2), 0.0, 0.0)
        assert longer.level == 2
        assert longer.mask_indices() == (1, 2)
        assert longer.tracked_frequencies() == {0, 4, 8, 12}
        assert longer.truncated(1) == state
        with pytest.raises(ValueError):
            longer.truncated(3)


class TestFirstAdmissible:
    def test_convex_segment(self):
        g = lambda x: (x - 10) ** 2
        assert first_admissible(g, 0, [100], 4, strict=False, cap=2**31) == 8

    def test_strict(self):
        g = lambda x: (x - 10) ** 2
        assert first_admissible(g, 0, [100], 4, strict=True, cap=2**31) == 9

    def test_breakpoint_itself(self):
        g = lambda x: 0 if x == 5 else 1
        assert first_admissible(g, 0, [5, 6], 0, strict=False, cap=100) == 5

    def test_constant_tail(self):
        g = lambda x: max(0, 7 - x)
        assert first_admissible(g, 0, [7], 0, strict=False, cap=100) == 7

    def test_cap(self):
        g = lambda x: (x - 10) ** 2
        with pytest.raises(SearchCapExceeded):
            first_admissible(g, 0, [100], 4, strict=False, cap=5)
        with pytest.raises(SearchCapExceeded):
            first_admissible(g, 0, [100], -1, strict=False, cap=2**31)

    def test_huge_gap(self):
        target = 2**60
        g = lambda x: max(0, target - x)
        assert first_admissible(g, 0, [target + 1], 0, strict=False, cap=2**62) == target


class TestSearches:
    def test_tail_index_for_zero(self):
        assert find_tail_index(stein(6), {0}, -1, 1e-6, cap=2**31) == 1

    def test_tail_index_respects_mask(self):
        assert find_tail_index(stein(6), {0}, 4, 1e-6, cap=2**31) == 5

    def test_choose_beta(self):
        assert choose_beta(stein(6), (0,), 0, 3, 1e-6, cap=2**31) == 16

    def test_choose_N(self):
        D = stein(6)
        N = choose_N(D, (0,), 16, 3, 1e-6)
        assert N == 4
        assert completeness_residual(D, 16, N) == 0

    def test_choose_N_horizon(self):
        with pytest.raises(HorizonExhausted):
            choose_N(stein(3), (0,), 200, 1, 1e-6)


class TestExactConstruction:
    def test_search_path_first_level(self):
        D = default_stein(2)
        state = step(D, ConstructionState.initial(ScheduleConfig(steps=2, mode="exact")))
        assert state.alpha == (0, 8)
        assert state.beta == (0, 4)
        assert state.mask == ((1, 2),)
        assert level_residuals(D, state) == (0, 0)

    def test_search_path_is_exact(self):
        D = default_stein(4)
        state = run_construction(D, ScheduleConfig(steps=4, mode="exact"))
        assert state.level == 4
        assert all(e == 0 for e in state.epsilons)
        assert verify_state(D, state).ok

    def test_placement(self, exact_stein):
        D, state = exact_stein
        assert state.level == 4
        assert all(e == 0 for e in state.epsilons)
        report = verify_state(D, state)
        assert report.ok
        assert report.max_residual == 0

    def test_frequencies_increase(self, exact_stein):
        _, state = exact_stein
        assert all(b > a for a, b in zip(state.alpha, state.alpha[1:]))
        assert all(b > a for a, b in zip(state.beta, state.beta[1:]))

    def test_placement_horizon(self):
        with pytest.raises(HorizonExhausted):
            place_exactly(stein(4), 4)

    def test_checker_measures_every_level(self):
        D = default_stein(18)
        state = place_exactly(D, 18)
        report = verify_state(D, state)
        assert report.ok
        assert [r.level for r in report.levels] == list(range(1, 19))

    def test_checker_ignores_support_index(self, exact_stein):
        D, state = exact_stein
        assert verify_state(_BlindIndex(D.pieces, D.name), state).ok

    def test_checker_flags_bad_mask(self, exact_stein):
        D, state = exact_stein
        tampered = replace(state, mask=((0, 5),) + state.mask)
        report = verify_state(D, tampered)
        assert not report.mask_ok
        assert not report.ok

    def test_checker_flags_residual(self, exact_stein):
        D, state = exact_stein
        tampered = replace(state, mask=state.mask[:-1])
        report = verify_state(D, tampered)
        assert report.mask_ok
        assert not report.ok
        assert report.max_residual > 0

    def test_state_document(self, exact_stein):
        D, state = exact_stein
        restored_D, restored = state_from_document(loads(dumps(state_to_document(D, state))))
        assert restored == state
        assert restored_D == D


class TestScanConstruction:
    def test_eta_schedule(self):
        D = default_stein(8)
        state = run_construction(D, ScheduleConfig(eta=1e-3, steps=8, mode="scan"))
        assert state.level == 8
        assert max(state.epsilons) < 1e-3
        for n in range(1, state.level):
            assert state.epsilons[n] <= growth_bound(n, state.epsilons[n - 1])
        assert all(m <= e + 1e-12 for m, e in zip(state.measured, state.epsilons))
        assert verify_state(D, state).ok

    def test_cap_exceeded(self):
        with pytest.raises(SearchCapExceeded):
            run_construction(default_stein(2), ScheduleConfig(eta=1e-3, steps=2, search_cap=1))

    @pytest.mark.parametrize("D, steps", [
        (basis_decomposition(1024), 6),
        (random_partition_decomposition(48, seed=5), 4),
        (_shifted_kernel_decomposition(512), 5),
    ], ids=["basis", "random-partition", "shifted-kernel"])
    def test_other_decompositions(self, D, steps):
        state = run_construction(D, ScheduleConfig(eta=1e-3, steps=steps, mode="scan"))
        assert state.level == steps
        assert max(state.epsilons) <= 1e-3
        report = verify_state(D, state)
        assert report.ok
        assert len(report.levels) == steps


class TestCertificates:
    def test_e12(self, exact_stein):
        D, state = exact_stein
        c = certify(D, state, 2, elementary(2, 0, 1))
        assert c.A == pytest.approx(1)
        assert c.B == pytest.approx(1)
        assert c.slack == 0
        assert c.C_lb == pytest.approx(1)
        assert not c.degenerate

    def test_d1_is_degenerate(self, exact_stein):
        D, state = exact_stein
        c = certify(D, state, 1, np.ones((1, 1)))
        assert c.B == 0
        assert c.degenerate

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_transfer_inequality_holds(self, exact_stein, d):
        D, state = exact_stein
        X = cauchy_witness(d)
        c = certify(D, state, d, X)
        assert abs(c.A - c.B) <= c.slack + 1e-8 * trace_norm(X)
        assert c.C_lb == pytest.approx(trace_norm(triangular_truncation(X)) / trace_norm(X), rel=1e-9)

    def test_transfer_element_is_isometric(self, exact_stein):
        _, state = exact_stein
        X = cauchy_witness(3)
        assert h1_matrix_norm(transfer_element(state, X)) == pytest.approx(trace_norm(X), rel=1e-12)

    def test_too_few_levels(self, exact_stein):
        D, state = exact_stein
        with pytest.raises(ValueError):
            certify(D, state, 5, cauchy_witness(5))

    def test_wrong_shape(self, exact_stein):
        D, state = exact_stein
        with pytest.raises(ValueError):
            certify(D, state, 3, cauchy_witness(2))

    def test_empty_mask_violates_transfer(self, exact_stein):
        D, state = exact_stein
        with pytest.raises(TransferInequalityViolated):
            certify(D, replace(state, mask=()), 2, elementary(2, 0, 1))

    def test_certificate_document(self, exact_stein):
        D, state = exact_stein
        c = certify(D, state, 3, cauchy_witness(3), witness_tag="cauchy")
        restored = certificate_from_document(loads(dumps(certificate_to_document(c))))
        assert (restored.d, restored.alpha, restored.beta, restored.mask_intervals) == (c.d, c.alpha, c.beta, c.mask_intervals)
        assert restored.C_lb == c.C_lb
        assert np.array_equal(restored.witness.entries, c.witness.entries)
        assert restored.witness_tag == "cauchy"

    def test_strategy_witness(self):
        assert strategy_witness("e12", 3)[0] == "e12"
        assert strategy_witness("cauchy", 1)[1].shape == (1, 1)
        with pytest.raises(ValueError):
            strategy_witness("best", 3)


class TestSweep:
    def test_empty(self, exact_stein):
        D, state = exact_stein
        result = sweep(D, state, [])
        assert result.certificates == ()
        assert result.failures == ()

    def test_collects_failures(self, exact_stein):
        D, state = exact_stein
        result = sweep(D, state, [5, 1, 2, 3], "cauchy")
        assert [c.d for c in result.certificates] == [1, 2, 3]
        assert [(f.d, f.kind) for f in result.failures] == [(5, "invalid")]
        assert result.certificates[0].degenerate

    def test_transfer_failure_kind(self, exact_stein):
        D, state = exact_stein
        result = sweep(D, replace(state, mask=()), [2], "e12")
        assert [f.kind for f in result.failures] == ["transfer-inequality"]

    def test_best_witness_nondecreasing(self, exact_stein):
        D, state = exact_stein
        result = sweep(D, state, [2, 3, 4], "best", restarts=2)
        values = [c.C_lb for c in result.certificates]
        assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))
        assert result.slope == result.slope

    def test_unknown_strategy(self, exact_stein):
        D, state = exact_stein
        with pytest.raises(ValueError):
            sweep(D, state, [2], "random")

    def test_asymptotic_slope_uses_large_d(self, exact_stein):
        D, state = exact_stein
        result = sweep(D, state, [2, 3, 4], "cauchy")
        assert result.slope == result.slope
        assert math.isnan(result.asymptotic_slope)
        restricted = sweep(D, state, [2, 3, 4], "cauchy", asymptotic_from=3)
        expected = log_slope([3, 4], [c.C_lb for c in restricted.certificates[1:]])
        assert restricted.asymptotic_slope == pytest.approx(expected)

    def test_amplified_ratio_increases_with_d(self):
        D = default_stein(8)
        state = place_exactly(D, 8)
        ratios = []
        for estimate in estimate_triangular_norms([2, 4, 8], restarts=1):
            Z = transfer_element(state, estimate.witness.entries)
            result = unconditionality_probe(D, "mask", trials=0, witnesses=[("Z", Z)], masks=[state.coefficients()])
            assert result.ratio >= estimate.lower_bound - 1e-9
            ratios.append(result.ratio)
        assert ratios[0] == pytest.approx(1)
        assert ratios[0] < ratios[1] < ratios[2]

    @pytest.mark.slow
    def test_lower_bounds_grow_logarithmically(self):
        ds = [2, 4, 8, 16, 32, 64, 128]
        D = default_stein(max(ds))
        state = place_exactly(D, max(ds))
        result = sweep(D, state, ds, "best", restarts=1)
        assert not result.failures
        values = [c.C_lb for c in result.certificates]
        assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))
        for c in result.certificates:
            assert c.C_lb == pytest.approx(triangular_map(c.d).ratio(c.witness.entries), abs=1e-6)
        assert 0.25 <= result.asymptotic_slope <= 0.40
