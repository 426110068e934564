import numpy as np
import pytest

from goldensdr.metrics import SubspacePair, vector_correlation
from goldensdr.simgen import (
    MODEL_IDS,
    GeneratedData,
    ModelSpec,
    default_noise,
    generate,
    random_orthogonal,
    read_basis_csv,
    read_dataset_csv,
    response_on_reduced,
    true_dimension,
    write_basis_csv,
    write_dataset_csv,
)


class TestRandomOrthogonal:
    def test_one_by_one_is_positive_unit(self):
        np.testing.assert_allclose(random_orthogonal(1, 0), [[1.0]])
        np.testing.assert_allclose(random_orthogonal(1, 12345), [[1.0]])

    def test_defining_property(self):
        for p in (2, 5, 11):
            v = random_orthogonal(p, 42)
            assert np.abs(v.T @ v - np.eye(p)).max() < 1e-10
            assert np.abs(v @ v.T - np.eye(p)).max() < 1e-10

    def test_deterministic_per_seed(self):
        np.testing.assert_array_equal(random_orthogonal(6, 7), random_orthogonal(6, 7))
        assert not np.array_equal(random_orthogonal(6, 7), random_orthogonal(6, 8))


class TestModelSpec:
    def test_dimensions(self):
        assert [true_dimension(i) for i in MODEL_IDS] == [5, 5, 4, 3, 3, 6, 5]

    def test_p_below_dimension_rejected(self):
        with pytest.raises(ValueError):
            ModelSpec(1, 100, p=4)

    def test_model3_requires_p10(self):
        with pytest.raises(ValueError):
            ModelSpec(3, 100, p=12)
        assert ModelSpec(3, 100, p=10).d_true == 4

    def test_model3_ignores_noise_override(self):
        assert ModelSpec(3, 10, p=10, noise=9.0).effective_noise == 0.5

    def test_printed_noise_defaults(self):
        assert default_noise(3) == 0.5
        assert all(default_noise(i) == 0.1 for i in MODEL_IDS if i != 3)

    def test_unknown_model(self):
        with pytest.raises(ValueError):
            ModelSpec(9, 100)


class TestGenerate:
    def test_reproducible_bit_for_bit(self):
        for model_id in MODEL_IDS:
            p = 10 if model_id == 3 else 12
            a = generate(ModelSpec(model_id, 50, p=p, seed=3))
            b = generate(ModelSpec(model_id, 50, p=p, seed=3))
            np.testing.assert_array_equal(a.x, b.x)
            np.testing.assert_array_equal(a.y, b.y)
            np.testing.assert_array_equal(a.beta_true, b.beta_true)

    def test_shapes_and_rank(self):
        data = generate(ModelSpec(6, 40, p=20, seed=1))
        assert data.x.shape == (40, 20)
        assert data.y.shape == (40,)
        assert data.beta_true.shape == (20, 6)
        assert np.all(np.isfinite(data.y))

    def test_model3_first_direction_is_unit(self):
        data = generate(ModelSpec(3, 5, p=10, seed=0))
        # (1,2,3,4,0,...)/sqrt(30): 1+4+9+16 = 30 exactly
        assert np.linalg.norm(data.beta_true[:, 0]) == pytest.approx(1.0, abs=1e-15)
        np.testing.assert_allclose(
            data.beta_true[:4, 0] * np.sqrt(30.0), [1.0, 2.0, 3.0, 4.0]
        )

    def test_noiseless_response_recomputes_exactly(self):
        data = generate(ModelSpec(4, 60, p=15, noise=0.0, seed=9))
        z = data.x @ data.beta_true
        np.testing.assert_allclose(response_on_reduced(4, z), data.y, atol=1e-12)

    def test_weak_direction_is_only_difference_between_models_1_and_7(self):
        m1 = generate(ModelSpec(1, 30, p=8, seed=5))
        m7 = generate(ModelSpec(7, 30, p=8, seed=5))
        np.testing.assert_array_equal(m1.x, m7.x)
        # row scalings 1.01 vs 0.01 on the first direction only
        np.testing.assert_allclose(m7.beta_true[:, 0] * 101.0, m1.beta_true[:, 0])
        np.testing.assert_array_equal(m7.beta_true[:, 1:], m1.beta_true[:, 1:])

    def test_model6_extends_model1_by_one_dimension(self):
        assert generate(ModelSpec(6, 5, p=20, seed=2)).d_true == 6
        assert generate(ModelSpec(1, 5, p=20, seed=2)).d_true == 5

    def test_covariate_moments(self):
        uniform = generate(ModelSpec(1, 10000, p=6, seed=4))
        assert np.abs(uniform.x.mean(axis=0)).max() < 0.05
        assert np.abs(uniform.x.var(axis=0) - 1.0 / 3.0).max() < 0.05
        gaussian = generate(ModelSpec(4, 10000, p=6, seed=4))
        assert np.abs(gaussian.x.mean(axis=0)).max() < 0.05
        assert np.abs(gaussian.x.var(axis=0) - 1.0).max() < 0.1

    def test_row_scaling_does_not_move_the_span(self):
        for model_id in (1, 6, 7):
            data = generate(ModelSpec(model_id, 5, p=10, seed=6))
            v = random_orthogonal(10, 6)  # same stream as the generator's V
            unscaled = v[: data.d_true, :].T
            r = vector_correlation(SubspacePair(unscaled, data.beta_true))
            assert r == pytest.approx(1.0, abs=1e-9)


class TestCsvRoundTrip:
    def test_dataset_round_trip_is_exact(self, tmp_path):
        data = generate(ModelSpec(5, 25, p=7, seed=8))
        path = tmp_path / "data.csv"
        write_dataset_csv(path, data.x, data.y)
        x, y = read_dataset_csv(path)
        np.testing.assert_array_equal(x, data.x)
        np.testing.assert_array_equal(y, data.y)
        header = path.read_text().splitlines()[0]
        assert header == "x1,x2,x3,x4,x5,x6,x7,y"

    def test_basis_round_trip_is_exact(self, tmp_path):
        data = generate(ModelSpec(3, 5, p=10, seed=8))
        path = tmp_path / "beta.csv"
        write_basis_csv(path, data.beta_true)
        np.testing.assert_array_equal(read_basis_csv(path), data.beta_true)

    def test_malformed_rows_are_diagnosed(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x1,x2,y\n1.0,2.0,3.0\n4.0,5.0\n")
        with pytest.raises(ValueError, match="line 3"):
            read_dataset_csv(path)

    def test_missing_header_is_diagnosed(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1.0,2.0,3.0\n")
        with pytest.raises(ValueError, match="header"):
            read_dataset_csv(path)

    def test_non_numeric_field_is_diagnosed(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x1,y\n1.0,oops\n")
        with pytest.raises(ValueError, match="non-numeric"):
            read_dataset_csv(path)
