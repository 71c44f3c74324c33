from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Literal

from dwiself.core.exceptions import ParameterError
from dwiself.denoise.config import DenoiseConfig
from dwiself.denoise.lowrank import lowrank_denoise
from dwiself.denoise.pipeline import patch2self
from dwiself.regress import Regularization
from dwiself.volume import Volume4D


__all__ = ("Method", "parse_method")


_SVD_PATTERN = re.compile(r"^svd-rank-(\d+)$")


@dataclass(frozen=True)
class Method:
    """A denoiser selectable by name: ``ols``, ``ridge`` or ``svd-rank-<r>``."""

    kind: Literal["ols", "ridge", "svd"]
    lam: float = 0.0
    rank: int = 0

    @property
    def label(self) -> str:
        if self.kind == "svd":
            return f"svd-rank-{self.rank}"
        if self.kind == "ridge":
            return f"patch2self-ridge-{self.lam:g}"
        return "patch2self-ols"

    def run(self, vol: Volume4D, cfg: DenoiseConfig) -> Volume4D:
        if self.kind == "svd":
            return lowrank_denoise(
                vol,
                self.rank,
                radius=cfg.radius,
                mask=cfg.mask,
                passthrough=cfg.passthrough,
                chunk_rows=cfg.chunk_rows,
            )
        regularization = Regularization.ridge(self.lam) if self.kind == "ridge" else Regularization()
        return patch2self(vol, replace(cfg, regularization=regularization))


def parse_method(name: str, lam: float | None = None) -> Method:
    """Resolve a method name; ``ridge`` needs ``lam`` and the others refuse it."""
    name = name.strip().lower()
    if (match := _SVD_PATTERN.match(name)) is not None:
        rank = int(match.group(1))
        if rank < 1:
            raise ParameterError("svd rank must be at least 1")
        if lam is not None:
            raise ParameterError("--lambda only applies to the ridge model")
        return Method("svd", rank=rank)
    if name == "ridge":
        if lam is None:
            raise ParameterError("the ridge model requires --lambda")
        if lam < 0:
            raise ParameterError(f"lambda must be non-negative, got {lam}")
        return Method("ridge", lam=float(lam))
    if name == "ols":
        if lam is not None:
            raise ParameterError("--lambda only applies to the ridge model")
        return Method("ols")
    raise ParameterError(f"unknown model {name!r}; expected ols, ridge or svd-rank-<r>")
