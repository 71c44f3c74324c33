from __future__ import annotations

import time
from typing import TYPE_CHECKING

import numpy as np
import structlog
from joblib import Parallel, delayed

from dwiself.denoise.config import DenoiseConfig
from dwiself.denoise.holdout import HoldoutSplit, build_holdout, check_holdout_index
from dwiself.regress import LinearModel, fit, predict_chunked
from dwiself.volume import PatchFeatures, Volume4D, extract_patches, scatter_rows

if TYPE_CHECKING:
    from dwiself.core.types import FloatArray


__all__ = ("fit_holdout", "denoise_volume", "patch2self")

logger = structlog.get_logger()


def fit_holdout(
    features: PatchFeatures, j: int, cfg: DenoiseConfig
) -> tuple[HoldoutSplit, LinearModel]:
    split = build_holdout(features, j, has_intercept=cfg.fit_intercept)
    return split, fit(split.design, split.target, cfg.regularization)


def denoise_volume(features: PatchFeatures, j: int, cfg: DenoiseConfig) -> FloatArray:
    """Self-supervised reconstruction of volume ``j``'s center voxels, one value per row."""
    split, model = fit_holdout(features, j, cfg)
    return predict_chunked(model, split.design, cfg.chunk_rows)


def _timed_volume(features: PatchFeatures, j: int, cfg: DenoiseConfig) -> tuple[FloatArray, float]:
    start = time.perf_counter()
    values = denoise_volume(features, j, cfg)
    return values, time.perf_counter() - start


def patch2self(vol: Volume4D, cfg: DenoiseConfig | None = None) -> Volume4D:
    """Denoise every volume of ``vol`` from the other volumes' patches."""
    cfg = cfg or DenoiseConfig()
    check_holdout_index(vol.n_volumes, 0)

    features = extract_patches(vol, cfg.radius, cfg.mask)
    columns = features.patch_size * (vol.n_volumes - 1)
    logger.info("denoise.config", dims=vol.dims, rows=features.rows, columns=columns, **cfg.describe())

    results = Parallel(n_jobs=cfg.threads, prefer="threads")(
        delayed(_timed_volume)(features, j, cfg) for j in range(vol.n_volumes)
    )

    out = np.empty(vol.dims, dtype=np.result_type(vol.dtype, np.float64))
    for j, (values, seconds) in enumerate(results):
        passthrough = vol.data[..., j] if cfg.passthrough == "copy" else 0.0
        out[..., j] = scatter_rows(values, features.voxel_index, vol.spatial_dims, passthrough)
        logger.info(
            "denoise.volume", volume=j, rows=features.rows, columns=columns, seconds=round(seconds, 4)
        )

    return vol.with_data(out)
