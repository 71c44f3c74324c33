"""Least-squares fitting of the hold-out regressors.

Fits run in float64 whatever the input precision. With an intercept, the columns
and target are centered first so the intercept stays unpenalized; the
coefficients are then the minimum-norm minimizer of the centered problem.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg

from dwiself.core.exceptions import (
    EmptyDesignError,
    NonFiniteInputError,
    NumericalError,
    ParameterError,
    ShapeMismatchError,
)
from dwiself.regress.models import OLS, DesignMatrix, LinearModel, Regularization

if TYPE_CHECKING:
    from dwiself.core.types import FloatArray


__all__ = ("fit", "predict", "predict_chunked", "singular_value_cutoff")


def singular_value_cutoff(rows: int, cols: int) -> float:
    """Relative cutoff below which singular values count as zero."""
    return max(rows, cols) * np.finfo(np.float64).eps


def _lstsq(a: FloatArray, b: FloatArray) -> tuple[FloatArray, int]:
    try:
        solution, _, rank, _ = scipy.linalg.lstsq(
            a,
            b,
            cond=singular_value_cutoff(*a.shape),
            lapack_driver="gelsd",
            check_finite=False,
        )
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"least-squares solve failed: {exc}") from exc
    return solution, int(rank)


def fit(X: DesignMatrix, y: FloatArray, reg: Regularization = OLS) -> LinearModel:
    """Minimize ``||X b + c - y||^2 (+ lam ||b||^2)`` over ``b`` (and ``c`` with an intercept)."""
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if X.rows == 0:
        raise EmptyDesignError()
    if y.size != X.rows:
        raise ShapeMismatchError(f"target has {y.size} entries for {X.rows} design rows")
    if not np.all(np.isfinite(y)):
        raise NonFiniteInputError()

    a = np.asarray(X.values, dtype=np.float64)
    if X.has_intercept:
        x_mean = a.mean(axis=0)
        y_mean = float(y.mean())
        a = a - x_mean
        b = y - y_mean
    else:
        x_mean = np.zeros(X.cols)
        y_mean = 0.0
        b = y

    if X.cols == 0:
        return LinearModel(np.zeros(0), y_mean, reg, rank=0)

    if reg.kind == "ridge" and reg.lam > 0:
        # augmented system [A; sqrt(lam) I] b = [y; 0]
        a = np.vstack([a, np.sqrt(reg.lam) * np.eye(X.cols)])
        b = np.concatenate([b, np.zeros(X.cols)])

    coefficients, rank = _lstsq(a, b)
    intercept = y_mean - float(x_mean @ coefficients) if X.has_intercept else 0.0
    return LinearModel(coefficients, intercept, reg, rank=rank)


def predict(model: LinearModel, X: DesignMatrix) -> FloatArray:
    if X.cols != model.n_features:
        raise ShapeMismatchError(
            f"design has {X.cols} columns, model expects {model.n_features}"
        )
    values = np.asarray(X.values, dtype=np.float64)
    return values @ model.coefficients + model.intercept


def predict_chunked(model: LinearModel, X: DesignMatrix, chunk_rows: int) -> FloatArray:
    """:func:`predict` over contiguous row blocks of at most ``chunk_rows`` rows."""
    if chunk_rows < 1:
        raise ParameterError(f"chunk_rows must be positive, got {chunk_rows}")
    if X.rows <= chunk_rows:
        return predict(model, X)
    out = np.empty(X.rows, dtype=np.float64)
    for start in range(0, X.rows, chunk_rows):
        stop = min(start + chunk_rows, X.rows)
        out[start:stop] = predict(model, X.block(start, stop))
    return out
