"""RMSE, R² and residual maps against a reference volume.

Scores pool every included voxel across every volume. ``rmse`` is symmetric in
its arguments; ``r_squared`` is not, its total sum of squares is taken about the
mean of ``ref``.
"""

from __future__ import annotations

import msgspec
import numpy as np

from dwiself.contrib.base import BaseStruct
from dwiself.core.exceptions import ConstantReferenceError, MetricError
from dwiself.volume import Mask3D, Volume4D


__all__ = ("EvalReport", "VolumeScore", "rmse", "r_squared", "residual_map", "evaluate")


class VolumeScore(BaseStruct, frozen=True):
    volume: int
    rmse: float
    r2: float | None


class EvalReport(BaseStruct, frozen=True):
    rmse: float
    r2: float
    voxel_count: int
    per_volume: list[VolumeScore] | msgspec.UnsetType = msgspec.UNSET


def _check_dims(a: Volume4D, b: Volume4D) -> None:
    if a.dims != b.dims:
        raise MetricError(f"dims {a.dims} and {b.dims} do not match")


def _included(ref: Volume4D, est: Volume4D, mask: Mask3D | None) -> tuple[np.ndarray, np.ndarray]:
    """``(voxels, volumes)`` arrays of the compared values."""
    _check_dims(ref, est)
    if mask is None:
        flags = np.ones(ref.spatial_dims, dtype=bool)
    else:
        if mask.dims != ref.spatial_dims:
            raise MetricError(f"mask dims {mask.dims} do not match volume dims {ref.spatial_dims}")
        flags = mask.flags
    if not flags.any():
        raise MetricError("mask selects no voxels")
    return (
        np.asarray(ref.data[flags], dtype=np.float64),
        np.asarray(est.data[flags], dtype=np.float64),
    )


def _rmse(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.sqrt(np.mean((a - b) ** 2)))


def _r2(ref: np.ndarray, est: np.ndarray) -> float:
    ss_tot = float(np.sum((ref - ref.mean()) ** 2))
    if ss_tot == 0:
        raise ConstantReferenceError()
    return 1.0 - float(np.sum((ref - est) ** 2)) / ss_tot


def rmse(ref: Volume4D, est: Volume4D, mask: Mask3D | None = None) -> float:
    return _rmse(*_included(ref, est, mask))


def r_squared(ref: Volume4D, est: Volume4D, mask: Mask3D | None = None) -> float:
    return _r2(*_included(ref, est, mask))


def residual_map(noisy: Volume4D, denoised: Volume4D) -> Volume4D:
    """Per-voxel squared difference ``(noisy - denoised)²``."""
    _check_dims(noisy, denoised)
    diff = np.asarray(noisy.data, dtype=np.float64) - denoised.data
    return noisy.with_data(diff**2)


def evaluate(
    ref: Volume4D, est: Volume4D, mask: Mask3D | None = None, *, per_volume: bool = False
) -> EvalReport:
    a, b = _included(ref, est, mask)
    scores: list[VolumeScore] | msgspec.UnsetType = msgspec.UNSET
    if per_volume:
        scores = []
        for j in range(a.shape[1]):
            try:
                r2 = _r2(a[:, j], b[:, j])
            except ConstantReferenceError:
                r2 = None
            scores.append(VolumeScore(volume=j, rmse=_rmse(a[:, j], b[:, j]), r2=r2))
    return EvalReport(rmse=_rmse(a, b), r2=_r2(a, b), voxel_count=a.shape[0], per_volume=scores)
