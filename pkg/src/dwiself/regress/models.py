from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from dwiself.core.exceptions import NonFiniteInputError, ParameterError, ShapeMismatchError

if TYPE_CHECKING:
    from dwiself.core.types import FloatArray, RegularizationKind


__all__ = ("DesignMatrix", "Regularization", "LinearModel", "OLS")


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    """Feature rows of a regression problem.

    ``has_intercept`` adds an implicit all-ones column that is never materialized.
    """

    values: FloatArray
    has_intercept: bool = True

    def __post_init__(self) -> None:
        values = np.asarray(self.values)
        if values.ndim == 1:
            values = values[:, np.newaxis]
        if values.ndim != 2:
            raise ShapeMismatchError(f"design matrix must be 2D, got {values.ndim} dimensions")
        if not np.all(np.isfinite(values)):
            raise NonFiniteInputError()
        object.__setattr__(self, "values", values)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    def block(self, start: int, stop: int) -> DesignMatrix:
        """Rows ``start:stop`` as a design of their own."""
        return DesignMatrix(self.values[start:stop], has_intercept=self.has_intercept)


@dataclass(frozen=True)
class Regularization:
    kind: RegularizationKind = "ols"
    lam: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("ols", "ridge"):
            raise ParameterError(f"unknown regularization {self.kind!r}")
        if not np.isfinite(self.lam) or self.lam < 0:
            raise ParameterError(f"lambda must be a finite non-negative number, got {self.lam}")
        if self.kind == "ols" and self.lam != 0:
            raise ParameterError("ordinary least squares takes no lambda")

    @classmethod
    def ridge(cls, lam: float) -> Regularization:
        return cls("ridge", float(lam))

    def __str__(self) -> str:
        return "ols" if self.kind == "ols" else f"ridge(lambda={self.lam:g})"


OLS = Regularization()


@dataclass(frozen=True, eq=False)
class LinearModel:
    """Fitted affine map ``x -> x @ coefficients + intercept``."""

    coefficients: FloatArray
    intercept: float
    regularization: Regularization = OLS
    rank: int | None = None

    def __post_init__(self) -> None:
        coefficients = np.array(self.coefficients, dtype=np.float64, copy=True).reshape(-1)
        coefficients.setflags(write=False)
        object.__setattr__(self, "coefficients", coefficients)
        object.__setattr__(self, "intercept", float(self.intercept))

    @property
    def n_features(self) -> int:
        return self.coefficients.size
