from .models import OLS, DesignMatrix, LinearModel, Regularization
from .solver import fit, predict, predict_chunked, singular_value_cutoff

__all__ = (
    "OLS",
    "DesignMatrix",
    "LinearModel",
    "Regularization",
    "fit",
    "predict",
    "predict_chunked",
    "singular_value_cutoff",
)
