from .config import DenoiseConfig
from .holdout import HoldoutSplit, build_holdout
from .lowrank import lowrank_denoise
from .methods import Method, parse_method
from .pipeline import denoise_volume, fit_holdout, patch2self

__all__ = (
    "DenoiseConfig",
    "HoldoutSplit",
    "Method",
    "build_holdout",
    "denoise_volume",
    "fit_holdout",
    "lowrank_denoise",
    "parse_method",
    "patch2self",
)
