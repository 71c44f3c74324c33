from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from dwiself.core.exceptions import HoldoutError
from dwiself.regress import DesignMatrix

if TYPE_CHECKING:
    from dwiself.core.types import FloatArray
    from dwiself.volume import PatchFeatures


__all__ = ("HoldoutSplit", "build_holdout", "check_holdout_index")


@dataclass(frozen=True, eq=False)
class HoldoutSplit:
    """Training problem for one held-out volume.

    ``design`` never contains a feature taken from volume ``held_out``; ``target``
    is that volume's center voxels.
    """

    held_out: int
    design: DesignMatrix
    target: FloatArray


def check_holdout_index(n_volumes: int, j: int) -> None:
    if n_volumes < 2:
        raise HoldoutError(f"at least 2 volumes required, got {n_volumes}")
    if not 0 <= j < n_volumes:
        raise HoldoutError(f"volume index {j} out of range [0, {n_volumes})")


def build_holdout(features: PatchFeatures, j: int, *, has_intercept: bool = True) -> HoldoutSplit:
    """Split patch features into the design of all volumes but ``j`` and volume ``j``'s centers.

    Design columns are grouped by volume in ascending index order (skipping ``j``);
    within a volume they follow the patch offset order.
    """
    check_holdout_index(features.n_volumes, j)
    rows = features.rows
    others = np.delete(features.features, j, axis=2)
    design = np.ascontiguousarray(others.transpose(0, 2, 1)).reshape(rows, -1)
    target = np.array(features.centers(j), copy=True)
    target.setflags(write=False)
    return HoldoutSplit(
        held_out=j,
        design=DesignMatrix(design, has_intercept=has_intercept),
        target=target,
    )
