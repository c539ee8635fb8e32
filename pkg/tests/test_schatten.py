"""Tests for trace norms, triangular truncation and map-norm estimates."""
import math

import numpy as np
import pytest

from src.schatten.growth import estimate_triangular_norms, log_slope, running_slopes, triangular_map
from src.schatten.maps import (
    EmptyWitnessList,
    LinearMatrixMap,
    map_norm_ascent,
    map_norm_brute_force,
    map_norm_lower,
)
from src.schatten.norms import SchattenMatrix, operator_norm, trace_norm
from src.schatten.truncation import MaskedTruncation, diag_modulate, triangular_truncation
from src.schatten.witnesses import cauchy_witness, elementary, witness_library


def _random_unitary(rng, d):
    Q, R = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


class TestTraceNorm:
    def test_diagonal(self):
        assert trace_norm(np.diag([1, -2, 3])) == pytest.approx(6)

    def test_elementary(self):
        assert trace_norm(elementary(3, 0, 2)) == pytest.approx(1)

    def test_rank_one_ones(self):
        assert trace_norm(np.ones((2, 2))) == pytest.approx(2)
        assert operator_norm(np.ones((2, 2))) == pytest.approx(2)

    def test_unitary_invariance(self, rng):
        X = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        U, V = _random_unitary(rng, 4), _random_unitary(rng, 4)
        assert trace_norm(U @ X @ V) == pytest.approx(trace_norm(X), rel=1e-12)

    def test_schatten_matrix_requires_square(self):
        with pytest.raises(ValueError):
            SchattenMatrix(np.zeros((2, 3)))


class TestTruncation:
    def test_strict_upper(self):
        X = np.array([[1, 2], [3, 4]])
        assert np.array_equal(triangular_truncation(X).entries, np.array([[0, 2], [0, 0]]))

    def test_mask_shape_mismatch(self):
        with pytest.raises(ValueError):
            MaskedTruncation.strict_upper(3)(np.eye(2))

    def test_diag_modulate_frequencies(self):
        Z = diag_modulate(np.ones((2, 2)), [0, 10], [0, 3])
        assert Z.entry(1, 1).support == (13,)
        assert Z.entry(0, 1).support == (3,)

    def test_diag_modulate_rejects_negative(self):
        with pytest.raises(ValueError):
            diag_modulate(np.ones((2, 2)), [0, -1], [0, 1])


class TestMapNormLower:
    def test_empty_witness_list(self):
        with pytest.raises(EmptyWitnessList):
            map_norm_lower(triangular_map(3), [])

    def test_zero_witness(self):
        with pytest.raises(ValueError):
            map_norm_lower(triangular_map(2), [np.zeros((2, 2))])

    def test_best_witness_is_kept(self):
        estimate = map_norm_lower(triangular_map(2), [np.eye(2), elementary(2, 0, 1)], ["identity", "e12"])
        assert estimate.lower_bound == pytest.approx(1)
        assert estimate.witness_tag == "e12"

    def test_ties_keep_first(self):
        estimate = map_norm_lower(LinearMatrixMap.identity(2), [np.eye(2), elementary(2, 0, 1)], ["a", "b"])
        assert estimate.witness_tag == "a"


class TestLinearMatrixMap:
    def test_from_function_adjoint(self, rng):
        phi = LinearMatrixMap.from_function(lambda X: X.T, 3, name="transpose")
        Y = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert np.allclose(phi.adjoint(Y), Y.T)
        assert np.allclose(phi(Y), Y.T)

    def test_matrix_of_identity(self):
        assert np.allclose(LinearMatrixMap.identity(2).matrix(), np.eye(4))


class TestAscent:
    def test_identity_map(self):
        assert map_norm_ascent(LinearMatrixMap.identity(3), 3).lower_bound == pytest.approx(1)

    def test_triangular_d2_is_one(self):
        [estimate] = estimate_triangular_norms([2])
        assert estimate.lower_bound == pytest.approx(1)

    def test_d1_vanishes(self):
        [estimate] = estimate_triangular_norms([1])
        assert estimate.lower_bound == 0

    def test_never_below_library(self):
        d = 5
        tags, witnesses = zip(*witness_library(d))
        library = map_norm_lower(triangular_map(d), list(witnesses), list(tags))
        ascent = map_norm_ascent(triangular_map(d), d)
        assert ascent.lower_bound >= library.lower_bound - 1e-12

    def test_witness_reproduces_bound(self):
        estimate = map_norm_ascent(triangular_map(4), 4)
        assert triangular_map(4).ratio(estimate.witness.entries) == pytest.approx(estimate.lower_bound, rel=1e-9)

    def test_agrees_with_brute_force_at_d3(self):
        ascent = map_norm_ascent(triangular_map(3), 3, restarts=8)
        brute = map_norm_brute_force(triangular_map(3), 3, samples=200_000)
        assert brute.lower_bound == pytest.approx(ascent.lower_bound, rel=2e-2)

    @pytest.mark.slow
    @pytest.mark.parametrize("d", [2, 3])
    def test_agrees_with_million_sample_search(self, d):
        ascent = map_norm_ascent(triangular_map(d), d)
        brute = map_norm_brute_force(triangular_map(d), d, samples=1_000_000)
        assert brute.lower_bound == pytest.approx(ascent.lower_bound, rel=1e-2)
        if d == 2:
            assert ascent.lower_bound == pytest.approx(1, abs=1e-6)

    @pytest.mark.parametrize("d", [
        2, 3, 4, 8,
        pytest.param(16, marks=pytest.mark.slow),
        pytest.param(32, marks=pytest.mark.slow),
    ])
    def test_operator_norm_duality(self, d):
        trace = map_norm_ascent(triangular_map(d), d, restarts=8)
        operator = map_norm_ascent(triangular_map(d), d, restarts=8, norm="operator")
        assert operator.lower_bound == pytest.approx(trace.lower_bound, rel=5e-2)

    def test_invalid_norm(self):
        with pytest.raises(ValueError):
            map_norm_ascent(triangular_map(2), 2, norm="frobenius")


class TestGrowth:
    def test_estimates_nondecreasing(self):
        estimates = estimate_triangular_norms([2, 3, 4, 5, 6], restarts=2)
        values = [e.lower_bound for e in estimates]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))

    def test_sizes_sorted_and_unique(self):
        estimates = estimate_triangular_norms([4, 2, 4], restarts=1)
        assert [e.d for e in estimates] == [2, 4]

    def test_invalid_size(self):
        with pytest.raises(ValueError):
            estimate_triangular_norms([0])

    def test_log_slope(self):
        ds = [2, 4, 8, 16]
        assert log_slope(ds, [2 * math.log(d) + 1 for d in ds]) == pytest.approx(2)

    def test_running_slopes_start_with_nan(self):
        slopes = running_slopes([2, 4], [1.0, 2.0])
        assert math.isnan(slopes[0])
        assert slopes[1] == pytest.approx(1 / math.log(2))

    def test_cauchy_witness_is_a_lower_bound(self):
        [estimate] = estimate_triangular_norms([6], restarts=1)
        assert estimate.lower_bound >= triangular_map(6).ratio(cauchy_witness(6)) - 1e-12

    @pytest.mark.slow
    def test_logarithmic_growth(self):
        ds = [16, 32, 64, 128]
        estimates = estimate_triangular_norms(ds, restarts=1)
        values = [e.lower_bound for e in estimates]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert 0.25 <= log_slope(ds, values) <= 0.40
