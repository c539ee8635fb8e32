"""Tests for decompositions, coefficient sums, probes and their JSON documents."""
from fractions import Fraction

import numpy as np
import pytest

from src.decomposition.codec import (
    decomposition_from_document,
    decomposition_to_document,
    load_decomposition,
)
from src.decomposition.decomposition import MultiplierDecomposition
from src.decomposition.pieces import DiagonalPiece, KernelPiece, TrapezoidPiece, column_l1
from src.decomposition.probe import (
    coefficient_rows,
    default_degree,
    default_test_set,
    restored_horizon,
    unconditionality_probe,
)
from src.decomposition.stein import (
    basis_decomposition,
    identity_decomposition,
    random_partition_decomposition,
    stein,
    stein_piece,
)
from src.decomposition.sums import (
    CoefficientVector,
    amplified_apply,
    apply_sum,
    sum_norms,
    tail_bound,
)
from src.jsonio import dumps, loads
from src.schema import DocumentValidationError, validate_document
from src.torus.fourier import MatrixTrigPoly, ScalarTrigPoly
from src.torus.quadrature import h1_matrix_norm, l1_norm


class TestSteinPieces:
    def test_values(self):
        assert stein_piece(1).value(2) == 1
        assert stein_piece(1).value(3) + stein_piece(2).value(3) == 1
        assert stein_piece(0).value(1) == 1
        assert stein_piece(0).value(2) == 0

    def test_negative_index(self):
        with pytest.raises(ValueError):
            stein_piece(-1)

    def test_exact_partition_of_unity(self):
        D = stein(16)
        for m in range(2**16 + 1):
            total = sum((D.column(k, m).get(m, Fraction(0)) for k in D.touching(m)), Fraction(0))
            assert total == 1, m

    def test_touching_uses_input_bounds(self):
        D = stein(6)
        assert D.touching(0) == (0,)
        assert D.touching(3) == (1, 2)
        assert D.touching(16) == (3, 4, 5)

    def test_completeness_index(self):
        D = stein(6)
        assert D.completeness_index(3) == 2
        assert D.completeness_index(2**6 + 1) is None

    def test_random_partition_is_partition_of_unity(self):
        D = random_partition_decomposition(6, seed=3)
        top = D.pieces[-1].nodes[-1][0]
        for m in range(0, top + 1, 7):
            total = sum((D.column(k, m).get(m, Fraction(0)) for k in D.touching(m)), Fraction(0))
            assert total == 1, m


class TestPieces:
    def test_trapezoid_requires_increasing_nodes(self):
        with pytest.raises(ValueError):
            TrapezoidPiece(((2, 1), (1, 0)))

    def test_kernel_column(self):
        piece = KernelPiece({(5, 1): 2, (6, 1): -1, (0, 0): 1})
        assert piece.column(1) == {5: 2, 6: -1}
        assert piece.input_bounds() == (0, 1)
        assert column_l1(piece.column(1)) == 3

    def test_diagonal_drops_zeros(self):
        piece = DiagonalPiece({0: 1, 1: 0, 2: 0.5j})
        assert piece.input_bounds() == (0, 2)
        assert piece.column(1) == {}

    def test_unsorted_bounds_fall_back_to_scan(self):
        D = MultiplierDecomposition((DiagonalPiece({10: 1}), DiagonalPiece({3: 1})))
        assert D.touching(3) == (1,)
        assert D.touching(10) == (0,)


class TestSums:
    def test_basis_mask(self):
        D = basis_decomposition(2)
        f = ScalarTrigPoly({0: 1, 1: 2, 2: 3})
        out = apply_sum(D, CoefficientVector((1, 0, 1), "mask"), f)
        assert out == ScalarTrigPoly({0: 1, 2: 3})

    def test_all_ones_restores(self):
        D = stein(3)
        e = ScalarTrigPoly.monomial(3)
        assert apply_sum(D, CoefficientVector.ones(4), e) == e

    def test_signs_cancel(self):
        D = stein(3)
        out = apply_sum(D, CoefficientVector((1, -1, 1, 1), "signs"), ScalarTrigPoly.monomial(3))
        assert not out

    def test_too_many_coefficients(self):
        with pytest.raises(ValueError):
            apply_sum(basis_decomposition(1), CoefficientVector.ones(3), ScalarTrigPoly.monomial(0))

    def test_invalid_coefficients(self):
        with pytest.raises(ValueError):
            CoefficientVector((1, 2), "mask")
        with pytest.raises(ValueError):
            CoefficientVector((0,), "signs")

    def test_from_intervals(self):
        a = CoefficientVector.from_intervals([(1, 2), (4, 4)])
        assert a.values == (0, 1, 1, 0, 1)
        assert a(10) == 0
        assert a.support() == (1, 2, 4)

    def test_tail_bound(self):
        D = stein(6)
        assert tail_bound(D, [1], 2) == 0
        assert tail_bound(D, [4], 0) == 1
        assert tail_bound(D, [], 0) == 0

    def test_tail_bound_dominates_tails(self, rng):
        D = stein(8)
        m, K = 48, 5
        bound = tail_bound(D, [m], K)
        for _ in range(16):
            values = tuple([0.0] * K + list(rng.uniform(-1, 1, len(D) - K)))
            image = apply_sum(D, CoefficientVector(values, "box"), ScalarTrigPoly.monomial(m))
            assert l1_norm(image) <= float(bound) + 1e-12

    def test_box_maximum_at_sign_vertices(self, rng):
        D = random_partition_decomposition(5, seed=11)
        f = ScalarTrigPoly({k: complex(rng.standard_normal(), rng.standard_normal()) for k in range(40)})
        signs = np.array([[1.0 if (v >> k) & 1 else -1.0 for k in range(len(D))] for v in range(2 ** len(D))])
        box = rng.uniform(-1, 1, (64, len(D)))
        assert sum_norms(D, box, f).max() <= sum_norms(D, signs, f).max() + 1e-12

    def test_box_maximum_at_sign_vertices_for_diagonal_decompositions(self, rng):
        for _ in range(20):
            n = int(rng.integers(1, 11))
            pieces = tuple(
                DiagonalPiece({int(m): complex(rng.standard_normal(), rng.standard_normal())
                               for m in rng.choice(32, size=8, replace=False)})
                for _ in range(n)
            )
            D = MultiplierDecomposition(pieces)
            signs = np.array([[1.0 if (v >> k) & 1 else -1.0 for k in range(n)] for v in range(2**n)])
            for _ in range(20):
                f = ScalarTrigPoly({k: complex(rng.standard_normal(), rng.standard_normal()) for k in range(32)})
                box = rng.uniform(-1, 1, (1000, n))
                assert sum_norms(D, box, f).max() <= sum_norms(D, signs, f).max() + 1e-12

    def test_sum_norms_match_l1(self):
        D = stein(4)
        f = ScalarTrigPoly({1: 1, 5: -2, 9: 0.5})
        row = (1, -1, 1, 1, -1)
        [value] = sum_norms(D, [row], f)
        expected = l1_norm(apply_sum(D, CoefficientVector(row, "signs"), f))
        assert value == pytest.approx(expected, rel=1e-2)

    def test_amplified_d1_matches_scalar(self):
        D = stein(4)
        f = ScalarTrigPoly({0: 1, 3: 2, 6: -1})
        a = CoefficientVector((1, 1, -1, 1, -1), "signs")
        F = amplified_apply(D, a, MatrixTrigPoly(1, {(0, 0): f}))
        assert F.entry(0, 0) == apply_sum(D, a, f)
        assert h1_matrix_norm(F) == pytest.approx(l1_norm(apply_sum(D, a, f)), rel=1e-7)


class TestUnconditionalityRatio:
    def test_identity_ratio_is_one(self):
        result = unconditionality_probe(identity_decomposition(64), "signs", trials=8)
        assert result.ratio == pytest.approx(1, rel=1e-9)

    def test_stein_ratio_at_least_one(self):
        result = unconditionality_probe(stein(8), "signs", trials=32)
        assert result.ratio >= 1 - 1e-9
        assert len(result.coefficients) == 9

    def test_rows_prefix_stable(self):
        long = coefficient_rows("signs", 6, 5, seed=7)
        short = coefficient_rows("signs", 3, 5, seed=7)
        assert np.array_equal(long[:, :3], short)
        assert np.all(long[0] == 1)

    def test_deterministic(self):
        a = unconditionality_probe(stein(6), "box", trials=16, seed=5)
        b = unconditionality_probe(stein(6), "box", trials=16, seed=5)
        assert a == b

    def test_default_test_set_degrees(self):
        tests = default_test_set(16)
        assert all(max(f.coeffs) <= 16 for _, f in tests)

    def test_invalid_trials(self):
        with pytest.raises(ValueError):
            unconditionality_probe(stein(2), trials=0)

    def test_default_degree_reaches_last_piece(self):
        D = stein(8)
        assert restored_horizon(D) == 2**8
        assert default_degree(D) == 2**8
        tests = default_test_set(default_degree(D))
        reached = {k for _, f in tests for m in f.coeffs for k in D.touching(m)}
        assert reached == set(range(len(D)))

    def test_default_degree_of_small_decompositions(self):
        assert default_degree(identity_decomposition(64)) == 64
        assert default_degree(basis_decomposition(5)) == 5

    def test_ratio_depends_on_last_piece(self):
        D = stein(8)
        full = unconditionality_probe(D, "signs", trials=16)
        truncated = unconditionality_probe(D, "signs", trials=16, length=len(D) - 1)
        assert full.ratio != truncated.ratio

    def test_reported_ratio_is_converged(self):
        D = stein(8)
        result = unconditionality_probe(D, "signs", trials=16)
        f = dict(default_test_set(default_degree(D)))[result.test_tag]
        expected = l1_norm(apply_sum(D, result.coefficients, f)) / l1_norm(f)
        assert result.ratio == pytest.approx(expected, rel=1e-12)

    @pytest.mark.slow
    def test_scalar_ratio_stabilizes(self):
        small = unconditionality_probe(stein(8), "signs", trials=256)
        large = unconditionality_probe(stein(12), "signs", trials=256)
        assert small.ratio >= 1 - 1e-9
        assert large.ratio / small.ratio <= 1.2

    def test_masks_only_needs_no_trials(self, exact_stein):
        D, state = exact_stein
        Z = MatrixTrigPoly(2, {(0, 1): ScalarTrigPoly.monomial(state.alpha[0] + state.beta[1])})
        result = unconditionality_probe(D, "mask", trials=0, witnesses=[("Z", Z)], masks=[state.coefficients()])
        assert result.ratio == pytest.approx(1)
        with pytest.raises(ValueError):
            unconditionality_probe(D, "mask", trials=0, witnesses=[("Z", Z)])

    def test_amplified_ratio_on_transfer_elements(self, exact_stein):
        D, state = exact_stein
        Z = MatrixTrigPoly(2, {(0, 1): ScalarTrigPoly.monomial(state.alpha[0] + state.beta[1])})
        result = unconditionality_probe(D, "signs", trials=4, witnesses=[("Z", Z)], masks=[state.coefficients()])
        assert result.d == 2
        assert result.ratio >= 1 - 1e-9


class TestCodec:
    def test_document_survives_json(self):
        D = MultiplierDecomposition((
            TrapezoidPiece(((0, 1), (2**80, Fraction(1, 3)))),
            DiagonalPiece({5: Fraction(1, 2), 6: 0.25 - 1j}),
            KernelPiece({(7, 5): 1, (8, 5): -2}),
        ), name="mixed")
        document = decomposition_to_document(D)
        assert document["pieces"][0]["nodes"][1] == [str(2**80), [1, 3]]
        restored = decomposition_from_document(loads(dumps(document)))
        assert restored == D

    def test_schema_rejects_unknown_piece(self):
        document = {"schema_version": 1, "pieces": [{"type": "wavelet", "support": []}]}
        assert validate_document("decomposition", document)
        with pytest.raises(DocumentValidationError):
            decomposition_from_document(document)

    def test_builtin_needs_size(self):
        with pytest.raises(ValueError):
            load_decomposition("stein")

    def test_builtin(self):
        assert len(load_decomposition("basis", 4)) == 5
        assert load_decomposition("stein", 3) == stein(3)
