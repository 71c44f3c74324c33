from __future__ import annotations

from pathlib import Path

from dwiself.core.exceptions import UnsupportedExtensionError
from dwiself.io.gradients import read_bvals_bvecs
from dwiself.io.nifti import NIFTI_EXTENSIONS, read_mask, read_nifti, write_nifti
from dwiself.io.raw import RAW_HEADER, RAW_MAGIC, RawHeader, read_raw, write_raw
from dwiself.volume import Volume4D


__all__ = (
    "RAW_EXTENSIONS",
    "RAW_HEADER",
    "RAW_MAGIC",
    "RawHeader",
    "read_bvals_bvecs",
    "read_mask",
    "read_nifti",
    "read_raw",
    "read_volume",
    "write_nifti",
    "write_raw",
    "write_volume",
)

RAW_EXTENSIONS = (".raw", ".p2s")


def _format(path: Path) -> str:
    name = path.name.lower()
    if name.endswith(NIFTI_EXTENSIONS):
        return "nifti"
    if name.endswith(RAW_EXTENSIONS):
        return "raw"
    raise UnsupportedExtensionError(
        f"{path.name}: expected one of {', '.join(NIFTI_EXTENSIONS + RAW_EXTENSIONS)}"
    )


def read_volume(path: Path | str) -> Volume4D:
    path = Path(path)
    return read_nifti(path) if _format(path) == "nifti" else read_raw(path)


def write_volume(vol: Volume4D, path: Path | str) -> None:
    path = Path(path)
    if _format(path) == "nifti":
        write_nifti(vol, path)
    else:
        write_raw(vol, path)
