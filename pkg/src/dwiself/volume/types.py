from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from dwiself.core.exceptions import MaskError, VolumeError

if TYPE_CHECKING:
    from dwiself.core.types import BoolArray, Dims3, Dims4, FloatArray, IndexArray, Spacing


__all__ = ("Volume4D", "Mask3D", "PatchFeatures", "CANONICAL_ORDER")


CANONICAL_ORDER = "F"
"""Flattening order of voxel data: x fastest, then y, z, volume slowest."""


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Volume4D:
    """An ``l × w × h × n`` stack of 3D volumes.

    ``data`` is indexed ``[x, y, z, j]``; the canonical flattened layout is Fortran
    order (x fastest). Spacing and affine are metadata only. Volumes with a single
    3D image (n = 1) are representable so that 3D files and masks can be read; the
    denoiser itself requires n >= 2.
    """

    data: FloatArray
    spacing: Spacing = (1.0, 1.0, 1.0)
    affine: FloatArray | None = field(default=None)

    def __post_init__(self) -> None:
        data = np.array(self.data, copy=True)
        if data.ndim == 3:
            data = data[..., np.newaxis]
        if data.ndim != 4:
            raise VolumeError(f"expected a 4D array, got {data.ndim} dimensions")
        if any(d < 1 for d in data.shape):
            raise VolumeError(f"every dimension must be positive, got {data.shape}")
        if not np.issubdtype(data.dtype, np.floating):
            data = data.astype(np.float64)
        if not np.all(np.isfinite(data)):
            raise VolumeError("volume contains NaN or infinite values")

        spacing = tuple(float(s) for s in self.spacing)
        if len(spacing) != 3:
            raise VolumeError(f"spacing must have 3 entries, got {len(spacing)}")

        affine = self.affine
        if affine is None:
            affine = np.diag([*spacing, 1.0])
        affine = np.array(affine, dtype=np.float64, copy=True)
        if affine.shape != (4, 4):
            raise VolumeError(f"affine must be 4x4, got {affine.shape}")

        object.__setattr__(self, "data", _readonly(data))
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "affine", _readonly(affine))

    @property
    def dims(self) -> Dims4:
        return tuple(int(d) for d in self.data.shape)  # type: ignore[return-value]

    @property
    def spatial_dims(self) -> Dims3:
        return self.dims[:3]  # type: ignore[return-value]

    @property
    def n_volumes(self) -> int:
        return self.dims[3]

    @property
    def n_voxels(self) -> int:
        l, w, h = self.spatial_dims
        return l * w * h

    @property
    def dtype(self) -> np.dtype:
        return self.data.dtype

    def volume(self, j: int) -> FloatArray:
        """The 3D image of volume ``j``."""
        if not 0 <= j < self.n_volumes:
            raise VolumeError(f"volume index {j} out of range [0, {self.n_volumes})")
        return self.data[..., j]

    def flat(self) -> FloatArray:
        """Data in canonical order as a 1D array of length l*w*h*n."""
        return self.data.ravel(order=CANONICAL_ORDER)

    def with_data(self, data: FloatArray) -> Volume4D:
        """A new volume sharing this volume's metadata."""
        return Volume4D(data, spacing=self.spacing, affine=self.affine)

    def select(self, indices) -> Volume4D:
        """Keep only the volumes at ``indices`` (in the given order)."""
        return self.with_data(self.data[..., list(indices)])

    def __repr__(self) -> str:
        return f"<Volume4D dims={self.dims} dtype={self.dtype} spacing={self.spacing}>"


@dataclass(frozen=True, eq=False)
class Mask3D:
    """Boolean voxel selection over an ``l × w × h`` grid."""

    flags: BoolArray

    def __post_init__(self) -> None:
        flags = np.array(self.flags, copy=True)
        if flags.ndim == 4 and flags.shape[3] == 1:
            flags = flags[..., 0]
        if flags.ndim != 3:
            raise MaskError(f"mask must be 3D, got {flags.ndim} dimensions")
        object.__setattr__(self, "flags", _readonly(flags.astype(bool)))

    @classmethod
    def full(cls, dims: Dims3) -> Mask3D:
        return cls(np.ones(dims, dtype=bool))

    @property
    def dims(self) -> Dims3:
        return tuple(int(d) for d in self.flags.shape)  # type: ignore[return-value]

    @property
    def count(self) -> int:
        return int(self.flags.sum())

    def check_against(self, vol: Volume4D, *, require_nonempty: bool = True) -> None:
        if self.dims != vol.spatial_dims:
            raise MaskError(
                f"mask dims {self.dims} do not match volume spatial dims {vol.spatial_dims}"
            )
        if require_nonempty and self.count == 0:
            raise MaskError("mask selects no voxels")

    def voxel_index(self) -> IndexArray:
        """Canonical (x fastest) linear indices of the selected voxels."""
        return np.flatnonzero(self.flags.ravel(order=CANONICAL_ORDER))


@dataclass(frozen=True, eq=False)
class PatchFeatures:
    """Flattened p-neighbourhoods of a set of voxels across all volumes.

    ``features`` has shape ``(rows, (2r+1)**3, n)``; patch offsets are flattened in
    raster order with dx fastest, so the center offset sits at ``((2r+1)**3 - 1) // 2``.
    ``voxel_index`` holds the canonical linear index of each row's voxel.
    """

    features: FloatArray
    radius: int
    voxel_index: IndexArray
    spatial_dims: Dims3

    def __post_init__(self) -> None:
        object.__setattr__(self, "features", _readonly(self.features))
        object.__setattr__(self, "voxel_index", _readonly(np.asarray(self.voxel_index, dtype=np.intp)))

    @property
    def rows(self) -> int:
        return self.features.shape[0]

    @property
    def patch_size(self) -> int:
        return self.features.shape[1]

    @property
    def n_volumes(self) -> int:
        return self.features.shape[2]

    @property
    def center(self) -> int:
        return (self.patch_size - 1) // 2

    def voxel_coords(self) -> tuple[IndexArray, IndexArray, IndexArray]:
        """``(x, y, z)`` coordinates of every row."""
        return np.unravel_index(self.voxel_index, self.spatial_dims, order=CANONICAL_ORDER)

    def centers(self, j: int) -> FloatArray:
        """Center-voxel values of volume ``j`` for every row."""
        return self.features[:, self.center, j]
