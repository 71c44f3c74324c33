from __future__ import annotations

from pathlib import Path

import numpy as np

from dwiself.core.exceptions import DwiselfIOError, MalformedHeaderError


__all__ = ("read_bvals_bvecs",)


def read_bvals_bvecs(bvals_path: Path | str, bvecs_path: Path | str) -> tuple[np.ndarray, np.ndarray]:
    """Whitespace-separated b-values and ``(n, 3)`` directions.

    Directions are accepted in FSL layout (3 rows) or one direction per row; a
    3×3 table is read as FSL layout.
    """
    try:
        bvals = np.loadtxt(bvals_path, dtype=np.float64, ndmin=1).reshape(-1)
        bvecs = np.loadtxt(bvecs_path, dtype=np.float64, ndmin=2)
    except OSError as exc:
        raise DwiselfIOError(f"cannot read gradient table: {exc}") from exc
    except ValueError as exc:
        raise MalformedHeaderError(f"gradient table is not numeric: {exc}") from exc

    if bvecs.shape[0] == 3:
        bvecs = bvecs.T
    if bvecs.shape[1] != 3:
        raise MalformedHeaderError(f"bvecs must have 3 components, got shape {bvecs.shape}")
    if bvecs.shape[0] != bvals.size:
        raise MalformedHeaderError(f"{bvals.size} b-values for {bvecs.shape[0]} directions")
    return bvals, bvecs
