import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from dwiself.core.exceptions import EmptyDesignError, NonFiniteInputError, ParameterError, ShapeMismatchError
from dwiself.regress import (
    OLS,
    DesignMatrix,
    LinearModel,
    Regularization,
    fit,
    predict,
    predict_chunked,
    singular_value_cutoff,
)


def _centered(a):
    return a - a.mean(axis=0)


def gram_oracle(X, y):
    """Full-rank OLS with intercept through the normal equations of the centered system."""
    Xc, yc = _centered(X), y - y.mean()
    beta = np.linalg.solve(Xc.T @ Xc, Xc.T @ yc)
    return beta, y.mean() - X.mean(axis=0) @ beta


def factored_oracle(A, B, y):
    """Minimum-norm OLS for X = A @ B, A full column rank, B full row rank.

    The pseudo-inverse of the centered product is B⁺ Ac⁺ with
    B⁺ = Bᵀ(BBᵀ)⁻¹ and Ac⁺ = (AcᵀAc)⁻¹Acᵀ.
    """
    Ac, yc = _centered(A), y - y.mean()
    a_pinv_y = np.linalg.solve(Ac.T @ Ac, Ac.T @ yc)
    beta = B.T @ np.linalg.solve(B @ B.T, a_pinv_y)
    X = A @ B
    return beta, y.mean() - X.mean(axis=0) @ beta


def _close(actual, expected, rtol):
    scale = max(np.linalg.norm(expected), 1e-12)
    return np.linalg.norm(np.asarray(actual) - expected) <= rtol * scale


def test_column_equal_to_target():
    y = np.array([1.0, 4.0, -2.0, 7.5, 3.0])
    model = fit(DesignMatrix(y), y)
    np.testing.assert_allclose(model.coefficients, [1.0], atol=1e-12)
    assert abs(model.intercept) < 1e-12
    np.testing.assert_allclose(predict(model, DesignMatrix(y)), y, atol=1e-12)


def test_constant_target_is_absorbed_by_intercept(rng):
    X = rng.standard_normal((12, 3))
    model = fit(DesignMatrix(X), np.full(12, 4.25))
    assert model.intercept == 4.25
    np.testing.assert_array_equal(model.coefficients, np.zeros(3))


def test_exact_full_rank_recovery(rng):
    X = rng.standard_normal((20, 3))
    beta = np.array([0.5, -2.0, 3.25])
    y = X @ beta
    model = fit(DesignMatrix(X, has_intercept=False), y)
    np.testing.assert_allclose(model.coefficients, beta, rtol=0, atol=1e-8)

    inverse = np.linalg.inv(X.T @ X)
    np.testing.assert_allclose(model.coefficients, inverse @ (X.T @ y), atol=1e-8)


def test_intercept_only_when_design_has_no_columns():
    model = fit(DesignMatrix(np.empty((4, 0))), np.array([1.0, 2.0, 3.0, 6.0]))
    assert model.n_features == 0
    assert model.intercept == 3.0


def test_solver_matches_oracles_on_random_systems():
    for seed in range(200):
        rng = np.random.default_rng(seed)
        cols = int(rng.integers(1, 9))
        deficient = cols > 1 and seed % 2 == 1
        if deficient:
            r = int(rng.integers(1, cols))
            rows = int(rng.integers(max(r + 2, 10), 51))
            A = rng.standard_normal((rows, r))
            # extra columns are exact doubles of existing ones
            picks = rng.integers(0, r, size=cols - r)
            B = np.hstack([np.eye(r), 2.0 * np.eye(r)[:, picks]])
            X = np.hstack([A, 2.0 * A[:, picks]])
            y = rng.standard_normal(rows)
            beta, intercept = factored_oracle(A, B, y)
        else:
            rows = int(rng.integers(cols + 3, 51))
            X = rng.standard_normal((rows, cols))
            y = rng.standard_normal(rows)
            beta, intercept = gram_oracle(X, y)

        model = fit(DesignMatrix(X), y)
        assert _close(model.coefficients, beta, 1e-6), seed
        assert abs(model.intercept - intercept) <= 1e-6 * max(1.0, abs(intercept)), seed
        if deficient:
            assert model.rank < cols


def test_duplicate_columns_do_not_crash(rng):
    a = rng.standard_normal(30)
    X = np.column_stack([a, a, a])
    y = 3 * a + 1
    model = fit(DesignMatrix(X), y)
    np.testing.assert_allclose(model.coefficients, [1.0, 1.0, 1.0], atol=1e-10)
    assert model.rank == 1


@given(seed=st.integers(0, 10_000), rows=st.integers(3, 40), cols=st.integers(1, 8))
@hsettings(max_examples=60, deadline=None)
def test_residual_is_orthogonal_to_design(seed, rows, cols):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((rows, cols)) * rng.uniform(0.1, 10, cols)
    y = rng.standard_normal(rows)
    model = fit(DesignMatrix(X), y)
    r = y - predict(model, DesignMatrix(X))
    bound = 1e-6 * np.linalg.norm(X) * np.linalg.norm(r) + 1e-10
    assert np.all(np.abs(X.T @ r) <= bound)
    assert abs(r.sum()) <= 1e-8 * max(1.0, np.abs(y).sum())


@given(seed=st.integers(0, 10_000), rows=st.integers(4, 40), cols=st.integers(1, 8))
@hsettings(max_examples=40, deadline=None)
def test_hat_map_is_idempotent(seed, rows, cols):
    rng = np.random.default_rng(seed)
    X = DesignMatrix(rng.standard_normal((rows, cols)))
    y = rng.standard_normal(rows)
    y_hat = predict(fit(X, y), X)
    y_hat2 = predict(fit(X, y_hat), X)
    np.testing.assert_allclose(y_hat2, y_hat, rtol=0, atol=1e-8)


@given(seed=st.integers(0, 10_000), rows=st.integers(4, 40), cols=st.integers(1, 8))
@hsettings(max_examples=40, deadline=None)
def test_hat_map_superposition(seed, rows, cols):
    rng = np.random.default_rng(seed)
    X = DesignMatrix(rng.standard_normal((rows, cols)))
    y1, y2 = rng.standard_normal(rows), rng.standard_normal(rows)
    combined = predict(fit(X, y1 + y2), X)
    separate = predict(fit(X, y1), X) + predict(fit(X, y2), X)
    np.testing.assert_allclose(combined, separate, rtol=0, atol=1e-8)


def test_ridge_zero_equals_ols(rng):
    X = DesignMatrix(rng.standard_normal((25, 4)))
    y = rng.standard_normal(25)
    ols = fit(X, y, OLS)
    ridge = fit(X, y, Regularization.ridge(0.0))
    np.testing.assert_allclose(ridge.coefficients, ols.coefficients, rtol=0, atol=1e-8)
    assert abs(ridge.intercept - ols.intercept) < 1e-8


@pytest.mark.parametrize("lam", [0.5, 3.0, 1e12])
def test_ridge_matches_closed_form_on_centered_data(rng, lam):
    X = _centered(rng.standard_normal((10, 2)))
    y = rng.standard_normal(10)
    y = y - y.mean()
    model = fit(DesignMatrix(X), y, Regularization.ridge(lam))
    expected = np.linalg.solve(X.T @ X + lam * np.eye(2), X.T @ y)
    assert _close(model.coefficients, expected, 1e-6)
    if lam == 1e12:
        assert np.all(np.abs(model.coefficients) < 1e-9)
        np.testing.assert_allclose(predict(model, DesignMatrix(X)), y.mean(), atol=1e-9)


def test_ridge_leaves_intercept_unpenalized(rng):
    X = rng.standard_normal((30, 3))
    y = rng.standard_normal(30) + 50.0
    model = fit(DesignMatrix(X), y, Regularization.ridge(1e9))
    assert abs(model.intercept - y.mean()) < 1e-4


def test_regularization_validation():
    with pytest.raises(ParameterError):
        Regularization("ols", 1.0)
    with pytest.raises(ParameterError):
        Regularization.ridge(-1.0)
    with pytest.raises(ParameterError):
        Regularization("lasso")
    assert str(Regularization.ridge(2.5)) == "ridge(lambda=2.5)"


def test_fit_errors():
    with pytest.raises(EmptyDesignError):
        fit(DesignMatrix(np.empty((0, 3))), np.empty(0))
    with pytest.raises(ShapeMismatchError):
        fit(DesignMatrix(np.ones((3, 2))), np.ones(4))
    with pytest.raises(NonFiniteInputError):
        fit(DesignMatrix(np.ones((3, 2))), np.array([1.0, np.inf, 2.0]))
    with pytest.raises(NonFiniteInputError):
        DesignMatrix(np.array([[1.0, np.nan]]))


def test_constant_model_prediction():
    model = LinearModel(np.zeros(3), 5.0)
    np.testing.assert_array_equal(predict(model, DesignMatrix(np.ones((4, 3)))), np.full(4, 5.0))
    with pytest.raises(ShapeMismatchError):
        predict(model, DesignMatrix(np.ones((4, 2))))


def test_interpolating_fit_reproduces_target(rng):
    X = rng.standard_normal((15, 4))
    y = X @ np.array([1.0, -1.0, 2.0, 0.5]) + 7.0
    model = fit(DesignMatrix(X), y)
    np.testing.assert_allclose(predict(model, DesignMatrix(X)), y, rtol=1e-10)


@pytest.mark.parametrize("chunk_rows", [1, 7, 64, 1000])
def test_chunked_prediction_matches(rng, chunk_rows):
    X = DesignMatrix(rng.standard_normal((100, 5)))
    model = fit(X, rng.standard_normal(100))
    np.testing.assert_allclose(predict_chunked(model, X, chunk_rows), predict(model, X), rtol=1e-12)
    with pytest.raises(ParameterError):
        predict_chunked(model, X, 0)


def test_single_precision_design_fits_in_double(rng):
    X = rng.standard_normal((40, 3)).astype(np.float32)
    y = (X.astype(np.float64) @ np.array([1.0, 2.0, 3.0])).astype(np.float32)
    model = fit(DesignMatrix(X), y)
    assert model.coefficients.dtype == np.float64
    np.testing.assert_allclose(model.coefficients, [1.0, 2.0, 3.0], atol=1e-5)


def test_cutoff_scales_with_shape():
    assert singular_value_cutoff(50, 8) == 50 * np.finfo(np.float64).eps
