import numpy as np
import pytest

from goldensdr.linalg import RankDeficientError
from goldensdr.metrics import SubspacePair, aggregate, mse, vector_correlation
from goldensdr.simgen import random_orthogonal


def e(i, p=3):
    v = np.zeros(p)
    v[i] = 1.0
    return v


class TestVectorCorrelation:
    def test_same_span_is_one(self):
        rng = np.random.default_rng(0)
        basis = rng.normal(size=(6, 3))
        pair = SubspacePair(basis, basis @ rng.normal(size=(3, 3)) + 0.0)
        # right-multiplying by an invertible matrix keeps the span
        assert vector_correlation(SubspacePair(basis, basis)) == pytest.approx(1.0)
        assert vector_correlation(pair) == pytest.approx(1.0, abs=1e-9)

    def test_orthogonal_spans_is_zero(self):
        pair = SubspacePair(np.column_stack([e(0), e(1)]), e(2)[:, None])
        assert vector_correlation(pair) == 0.0

    def test_analytic_sixty_degrees(self):
        truth = np.array([[1.0], [0.0]])
        hat = np.array([[np.cos(np.pi / 3)], [np.sin(np.pi / 3)]])
        r = vector_correlation(SubspacePair(truth, hat))
        assert r == pytest.approx(0.5, abs=1e-10)

    def test_overestimated_dimension_is_zero(self):
        truth = np.array([[1.0], [0.0]])  # d = 1
        hat = np.eye(2)  # d_hat = 2
        assert vector_correlation(SubspacePair(truth, hat)) == 0.0

    def test_range_and_basis_invariance(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            p = rng.integers(2, 8)
            d = rng.integers(1, p + 1)
            d_hat = rng.integers(1, p + 1)
            pair = SubspacePair(rng.normal(size=(p, d)), rng.normal(size=(p, d_hat)))
            r = vector_correlation(pair)
            assert 0.0 <= r <= 1.0
            change = rng.normal(size=(d, d)) + 2 * np.eye(d)
            r2 = vector_correlation(
                SubspacePair(pair.beta_true @ change, pair.beta_hat)
            )
            assert abs(r - r2) < 1e-9

    def test_symmetry_equal_dims(self):
        rng = np.random.default_rng(2)
        a = rng.normal(size=(6, 3))
        b = rng.normal(size=(6, 3))
        r_ab = vector_correlation(SubspacePair(a, b))
        r_ba = vector_correlation(SubspacePair(b, a))
        assert r_ab == pytest.approx(r_ba, abs=1e-10)

    def test_contained_subspace_is_one(self):
        q = random_orthogonal(6, 3)[:, :4]
        sub = q[:, [0, 2]]  # 2-dim subset of the 4-dim truth
        assert vector_correlation(SubspacePair(q, sub)) == pytest.approx(1.0, abs=1e-10)

    def test_rank_deficient_raises(self):
        degenerate = np.column_stack([e(0), e(0)])
        with pytest.raises(RankDeficientError):
            vector_correlation(SubspacePair(degenerate, e(1)[:, None]))


class TestMse:
    def test_identical(self):
        assert mse([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_hand_case(self):
        assert mse([1.0, 1.0], [0.0, 2.0]) == pytest.approx(1.0)

    def test_against_loop_oracles(self):
        rng = np.random.default_rng(3)
        pred = rng.normal(size=100)
        truth = rng.normal(size=100)
        one_pass = sum((a - b) ** 2 for a, b in zip(pred, truth)) / 100
        diffs = [a - b for a, b in zip(pred, truth)]
        two_pass = sum(d * d for d in diffs) / len(diffs)
        assert mse(pred, truth) == pytest.approx(one_pass, abs=1e-12)
        assert mse(pred, truth) == pytest.approx(two_pass, abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            mse([1.0], [1.0, 2.0])


class TestAggregate:
    def test_constant(self):
        assert aggregate([1.0, 1.0, 1.0]) == (1.0, 0.0)

    def test_two_values(self):
        mean, se = aggregate([0.0, 2.0])
        assert mean == pytest.approx(1.0)
        assert se == pytest.approx(1.0)  # sd = sqrt(2), over sqrt(2)

    def test_against_two_pass_oracle(self):
        rng = np.random.default_rng(4)
        vals = rng.normal(size=10)
        m = sum(vals) / len(vals)
        var = sum((v - m) ** 2 for v in vals) / (len(vals) - 1)
        mean, se = aggregate(vals)
        assert mean == pytest.approx(m, abs=1e-12)
        assert se == pytest.approx(np.sqrt(var / len(vals)), abs=1e-12)

    def test_single_value_rejected(self):
        with pytest.raises(ValueError):
            aggregate([1.0])
