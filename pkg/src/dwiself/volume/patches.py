from __future__ import annotations

import itertools
from typing import TYPE_CHECKING

import numpy as np

from dwiself.core.exceptions import VolumeError
from dwiself.volume.types import CANONICAL_ORDER, Mask3D, PatchFeatures, Volume4D

if TYPE_CHECKING:
    from dwiself.core.types import Dims3, FloatArray, IndexArray


__all__ = ("extract_patches", "gather_rows", "scatter_rows", "patch_offsets")


def patch_offsets(radius: int) -> list[tuple[int, int, int]]:
    """``(dx, dy, dz)`` offsets of a cubic patch in raster order, dx fastest."""
    span = range(-radius, radius + 1)
    return [(dx, dy, dz) for dz, dy, dx in itertools.product(span, repeat=3)]


def extract_patches(vol: Volume4D, radius: int, mask: Mask3D | None = None) -> PatchFeatures:
    """Collect the ``(2r+1)**3`` neighbourhood of every included voxel across all volumes.

    Out-of-bounds neighbours take the value of the nearest in-bounds voxel along each
    axis (edge replication). Rows follow the canonical voxel order.
    """
    if radius < 0:
        raise VolumeError(f"patch radius must be non-negative, got {radius}")

    dims = vol.spatial_dims
    if mask is None:
        voxel_index = np.arange(vol.n_voxels, dtype=np.intp)
    else:
        mask.check_against(vol)
        voxel_index = mask.voxel_index()

    xs, ys, zs = np.unravel_index(voxel_index, dims, order=CANONICAL_ORDER)
    pad = ((radius, radius),) * 3 + ((0, 0),)
    padded = np.pad(vol.data, pad, mode="edge")

    offsets = patch_offsets(radius)
    features = np.empty((voxel_index.size, len(offsets), vol.n_volumes), dtype=vol.dtype)
    for p, (dx, dy, dz) in enumerate(offsets):
        features[:, p, :] = padded[xs + radius + dx, ys + radius + dy, zs + radius + dz, :]

    return PatchFeatures(
        features=features,
        radius=radius,
        voxel_index=voxel_index,
        spatial_dims=dims,
    )


def gather_rows(image: FloatArray, voxel_index: IndexArray) -> FloatArray:
    """Values of a 3D image at the given canonical voxel indices."""
    flat = np.asarray(image).ravel(order=CANONICAL_ORDER)
    if voxel_index.size and (voxel_index.min() < 0 or voxel_index.max() >= flat.size):
        raise VolumeError("voxel index out of bounds")
    return flat[voxel_index]


def scatter_rows(
    values: FloatArray,
    voxel_index: IndexArray,
    dims: Dims3,
    passthrough: float | FloatArray = 0.0,
) -> FloatArray:
    """Place row values back on the 3D grid.

    Voxels without a row keep ``passthrough``: either a scalar fill or a 3D image
    of shape ``dims`` whose values are copied.
    """
    values = np.asarray(values)
    voxel_index = np.asarray(voxel_index, dtype=np.intp)
    if values.shape != voxel_index.shape:
        raise VolumeError(
            f"{values.size} values for {voxel_index.size} voxel positions"
        )
    size = int(np.prod(dims))
    if voxel_index.size and (voxel_index.min() < 0 or voxel_index.max() >= size):
        raise VolumeError(f"voxel index out of bounds for grid {tuple(dims)}")

    if np.ndim(passthrough) == 0:
        dtype = np.result_type(values.dtype, np.asarray(passthrough).dtype)
        out = np.full(size, passthrough, dtype=dtype)
    else:
        base = np.asarray(passthrough)
        if base.shape != tuple(dims):
            raise VolumeError(f"passthrough image shape {base.shape} does not match {tuple(dims)}")
        out = base.ravel(order=CANONICAL_ORDER).astype(np.result_type(values.dtype, base.dtype))
    out[voxel_index] = values
    return out.reshape(dims, order=CANONICAL_ORDER)
