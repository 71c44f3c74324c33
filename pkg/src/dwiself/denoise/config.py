from __future__ import annotations

from dataclasses import dataclass, field

from dwiself.conf import settings
from dwiself.core.exceptions import ParameterError
from dwiself.core.types import PassthroughPolicy
from dwiself.regress import Regularization
from dwiself.volume import Mask3D


__all__ = ("DenoiseConfig",)


def _default_regularization() -> Regularization:
    if settings.DEFAULT_MODEL == "ridge":
        return Regularization.ridge(settings.DEFAULT_RIDGE_LAMBDA)
    return Regularization()


@dataclass(frozen=True)
class DenoiseConfig:
    """Parameters of one denoising run."""

    radius: int = field(default_factory=lambda: settings.DEFAULT_RADIUS)
    regularization: Regularization = field(default_factory=_default_regularization)
    mask: Mask3D | None = None
    passthrough: PassthroughPolicy = field(default_factory=lambda: settings.PASSTHROUGH)
    """What unmasked voxels hold in the output: the input value or zero."""
    threads: int = field(default_factory=lambda: settings.THREADS)
    chunk_rows: int = field(default_factory=lambda: settings.CHUNK_ROWS)
    fit_intercept: bool = field(default_factory=lambda: settings.FIT_INTERCEPT)

    def __post_init__(self) -> None:
        if self.radius < 0:
            raise ParameterError(f"radius must be non-negative, got {self.radius}")
        if self.passthrough not in ("copy", "zero"):
            raise ParameterError(f"unknown passthrough policy {self.passthrough!r}")
        if self.threads < 1:
            raise ParameterError(f"threads must be positive, got {self.threads}")
        if self.chunk_rows < 1:
            raise ParameterError(f"chunk_rows must be positive, got {self.chunk_rows}")

    def describe(self) -> dict[str, object]:
        return {
            "radius": self.radius,
            "regularization": str(self.regularization),
            "masked": self.mask is not None,
            "passthrough": self.passthrough,
            "threads": self.threads,
            "chunk_rows": self.chunk_rows,
            "intercept": self.fit_intercept,
        }
