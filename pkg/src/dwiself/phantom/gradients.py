from __future__ import annotations

from collections.abc import Mapping

import numpy as np

from dwiself.core.exceptions import ParameterError
from dwiself.phantom.schemas import GradientEntry


__all__ = ("hemisphere_directions", "build_gradient_table", "gradient_table_from_arrays")


_GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


def hemisphere_directions(count: int) -> np.ndarray:
    """``count`` unit vectors spread over the upper hemisphere (Fibonacci lattice)."""
    if count < 0:
        raise ParameterError(f"direction count must be non-negative, got {count}")
    i = np.arange(count, dtype=np.float64)
    z = 1.0 - (i + 0.5) / max(count, 1)
    r = np.sqrt(1.0 - z**2)
    phi = i * _GOLDEN_ANGLE
    dirs = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


def build_gradient_table(n_b0: int, shells: Mapping[float, int]) -> list[GradientEntry]:
    """``n_b0`` unweighted volumes followed by each shell in ascending b order."""
    if n_b0 < 0:
        raise ParameterError(f"b0 count must be non-negative, got {n_b0}")
    table = [GradientEntry(b=0.0) for _ in range(n_b0)]
    for bvalue in sorted(shells):
        if bvalue <= 0:
            raise ParameterError(f"shell b-values must be positive, got {bvalue}")
        for g in hemisphere_directions(int(shells[bvalue])):
            table.append(GradientEntry(b=float(bvalue), g=tuple(float(v) for v in g)))
    return table


def gradient_table_from_arrays(bvals: np.ndarray, bvecs: np.ndarray) -> list[GradientEntry]:
    """Gradient entries from parallel b-value and direction arrays.

    Directions of b=0 entries are ignored; other directions are normalized only if
    they are already within rounding of unit length.
    """
    bvals = np.asarray(bvals, dtype=np.float64).reshape(-1)
    bvecs = np.asarray(bvecs, dtype=np.float64).reshape(-1, 3)
    if bvals.size != bvecs.shape[0]:
        raise ParameterError(f"{bvals.size} b-values for {bvecs.shape[0]} directions")
    table = []
    for b, g in zip(bvals, bvecs):
        if b == 0:
            table.append(GradientEntry(b=0.0))
        else:
            norm = np.linalg.norm(g)
            if norm > 0 and abs(norm - 1.0) < 1e-3:
                g = g / norm
            table.append(GradientEntry(b=float(b), g=tuple(float(v) for v in g)))
    return table
