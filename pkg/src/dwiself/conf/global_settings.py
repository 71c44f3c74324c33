"""
Default settings for dwiself.

A settings module named by ``DWISELF_SETTINGS_MODULE`` overrides any of these
UPPERCASE names.
"""

from __future__ import annotations

from typing import Literal


########## ------------------------------- DENOISING --------------------------------- ##########

DEFAULT_RADIUS: int = 0
"""Patch radius; 0 selects the voxel itself."""
DEFAULT_MODEL: Literal["ols", "ridge"] = "ols"
DEFAULT_RIDGE_LAMBDA: float = 1.0
FIT_INTERCEPT: bool = True
PASSTHROUGH: Literal["copy", "zero"] = "copy"
"""Policy for voxels outside the training mask."""
CHUNK_ROWS: int = 65536
"""Rows predicted per block."""

####### -------------------------------- PARALLELISM ------------------------------ ##########

THREADS: int = 1
THREADS_ENVVAR: str = "DWISELF_THREADS"

####### -------------------------------- PHANTOM ---------------------------------- ##########

DEFAULT_SEED: int = 0
RNG_ALGORITHM: Literal["Philox", "PCG64"] = "Philox"
NOISE_CHANNELS: int = 8
PHANTOM_DIMS: tuple[int, int, int] = (24, 24, 24)
PHANTOM_B0_VOLUMES: int = 2
PHANTOM_DIRECTIONS: int = 28
PHANTOM_BVALUE: float = 1000.0
PHANTOM_SPACING: tuple[float, float, float] = (2.0, 2.0, 2.0)

##### -------------------------------- BASELINE ------------------------------------ ###########

SVD_RANK: int = 2
SVD_RADIUS: int = 1

#### -------------------------------- REPORTS -------------------------------------- ###########

CSV_SCHEMA_VERSION: int = 1
SWEEP_SNRS: tuple[float, ...] = (10.0, 15.0, 20.0, 25.0, 30.0)

#### -------------------------------- IO ------------------------------------------- ###########

NIFTI_DTYPES: tuple[str, ...] = ("int16", "uint16", "float32", "float64")

# ----------------------------- SYSTEM LOG -------------------------------------------

LOG_LEVEL: int = 20
"""Stdlib log levels.

Only emit logs at this level, or higher.
"""
