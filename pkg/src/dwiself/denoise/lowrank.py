"""Fixed-rank local SVD comparison baseline.

Each voxel's neighbourhood forms a ``(2r+1)**3 × n`` Casorati matrix; it is cut to
a fixed rank and the center row kept. This is a reference point for sweeps, not a
noise-adaptive threshold.
"""

from __future__ import annotations

import numpy as np
import structlog

from dwiself.conf import settings
from dwiself.core.exceptions import NumericalError, ParameterError
from dwiself.volume import Mask3D, Volume4D, extract_patches, scatter_rows


__all__ = ("lowrank_denoise",)

logger = structlog.get_logger()


def lowrank_denoise(
    vol: Volume4D,
    rank: int,
    radius: int | None = None,
    mask: Mask3D | None = None,
    passthrough: str = "copy",
    chunk_rows: int | None = None,
) -> Volume4D:
    if rank < 1:
        raise ParameterError(f"rank must be at least 1, got {rank}")
    radius = settings.SVD_RADIUS if radius is None else radius
    chunk_rows = chunk_rows or settings.CHUNK_ROWS

    features = extract_patches(vol, radius, mask)
    center = features.center
    denoised = np.empty((features.rows, vol.n_volumes), dtype=np.float64)

    for start in range(0, features.rows, chunk_rows):
        stop = min(start + chunk_rows, features.rows)
        block = np.asarray(features.features[start:stop], dtype=np.float64)
        try:
            u, s, vt = np.linalg.svd(block, full_matrices=False)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"local SVD failed: {exc}") from exc
        k = min(rank, s.shape[1])
        denoised[start:stop] = np.einsum(
            "rk,rk,rkn->rn", u[:, center, :k], s[:, :k], vt[:, :k, :]
        )

    logger.info("denoise.lowrank", rank=rank, radius=radius, rows=features.rows)

    out = np.empty(vol.dims, dtype=np.float64)
    for j in range(vol.n_volumes):
        fill = vol.data[..., j] if passthrough == "copy" else 0.0
        out[..., j] = scatter_rows(denoised[:, j], features.voxel_index, vol.spatial_dims, fill)
    return vol.with_data(out)
