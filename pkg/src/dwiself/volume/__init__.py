from .patches import extract_patches, gather_rows, patch_offsets, scatter_rows
from .types import CANONICAL_ORDER, Mask3D, PatchFeatures, Volume4D

__all__ = (
    "CANONICAL_ORDER",
    "Mask3D",
    "PatchFeatures",
    "Volume4D",
    "extract_patches",
    "gather_rows",
    "patch_offsets",
    "scatter_rows",
)
