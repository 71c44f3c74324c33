"""Single-file NIfTI-1 reader and writer.

Supported: ``.nii`` and ``.nii.gz`` with ``n+1`` magic, 3D or 4D data of dtype
int16, uint16, float32 or float64. Header fields are decoded by nibabel; the
byte-level checks below run first so that every malformed file maps onto one
typed :class:`~dwiself.core.exceptions.DwiselfIOError`.
"""

from __future__ import annotations

import gzip
import io
import zlib
from pathlib import Path

import nibabel as nib
import numpy as np
import structlog
from nibabel.spatialimages import HeaderDataError

from dwiself.conf import settings
from dwiself.core.exceptions import (
    BadMagicError,
    DimensionError,
    DwiselfIOError,
    MalformedHeaderError,
    TruncatedFileError,
    UnsupportedDtypeError,
    UnsupportedExtensionError,
)
from dwiself.io._atomic import atomic_write_bytes
from dwiself.volume import Mask3D, Volume4D


__all__ = ("read_nifti", "write_nifti", "read_mask", "NIFTI_EXTENSIONS")

logger = structlog.get_logger()

NIFTI_EXTENSIONS = (".nii", ".nii.gz")

HEADER_SIZE = 348
SINGLE_FILE_OFFSET = 352
SINGLE_FILE_MAGIC = b"n+1\x00"
MAX_DIMS = 4


def _is_gzip(path: Path) -> bool:
    return path.name.lower().endswith(".nii.gz")


def _check_extension(path: Path) -> None:
    if not path.name.lower().endswith(NIFTI_EXTENSIONS):
        raise UnsupportedExtensionError(
            f"{path.name}: expected one of {', '.join(NIFTI_EXTENSIONS)}"
        )


def _read_bytes(path: Path) -> bytes:
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise DwiselfIOError(f"cannot read {path}: {exc.strerror or exc}") from exc
    if not _is_gzip(path):
        return raw
    try:
        return gzip.decompress(raw)
    except EOFError as exc:
        raise TruncatedFileError(f"{path.name}: compressed stream ends early") from exc
    except (OSError, zlib.error) as exc:
        raise MalformedHeaderError(f"{path.name}: not a valid gzip stream ({exc})") from exc


def _parse_header(raw: bytes, name: str) -> nib.Nifti1Header:
    if len(raw) < HEADER_SIZE:
        raise TruncatedFileError(
            f"{name}: expected at least {HEADER_SIZE} header bytes, got {len(raw)}"
        )
    for endian in ("<", ">"):
        if int(np.frombuffer(raw, dtype=f"{endian}i4", count=1)[0]) == HEADER_SIZE:
            break
    else:
        raise MalformedHeaderError(f"{name}: sizeof_hdr is not {HEADER_SIZE}")

    magic = raw[344:348]
    if magic != SINGLE_FILE_MAGIC:
        raise BadMagicError(f"{name}: magic {magic!r} is not a single-file NIfTI-1 magic")

    try:
        return nib.Nifti1Header.from_fileobj(io.BytesIO(raw[:HEADER_SIZE]), endianness=endian, check=False)
    except (HeaderDataError, ValueError) as exc:
        raise MalformedHeaderError(f"{name}: {exc}") from exc


def _data_shape(header: nib.Nifti1Header, name: str) -> tuple[int, ...]:
    dim = [int(d) for d in header["dim"]]
    ndim = dim[0]
    if not 1 <= ndim <= 7:
        raise MalformedHeaderError(f"{name}: dim[0] = {ndim} outside 1..7")
    if ndim > MAX_DIMS:
        raise DimensionError(f"{name}: {ndim}-dimensional data, at most {MAX_DIMS} supported")
    shape = tuple(dim[1 : ndim + 1])
    if any(d < 1 for d in shape):
        raise MalformedHeaderError(f"{name}: non-positive dimension in {shape}")
    return shape + (1,) * (3 - ndim) if ndim < 3 else shape


def _data_dtype(header: nib.Nifti1Header, name: str) -> np.dtype:
    code = int(header["datatype"])
    try:
        dtype = header.get_data_dtype()
    except (HeaderDataError, KeyError) as exc:
        raise UnsupportedDtypeError(f"{name}: unknown datatype code {code}") from exc
    if dtype.name not in settings.NIFTI_DTYPES:
        raise UnsupportedDtypeError(
            f"{name}: datatype {dtype.name} not in {', '.join(settings.NIFTI_DTYPES)}"
        )
    return dtype


def read_nifti(path: Path | str) -> Volume4D:
    path = Path(path)
    _check_extension(path)
    raw = _read_bytes(path)
    header = _parse_header(raw, path.name)
    shape = _data_shape(header, path.name)
    dtype = _data_dtype(header, path.name)

    offset = int(header.get_data_offset())
    if offset < SINGLE_FILE_OFFSET:
        raise MalformedHeaderError(f"{path.name}: vox_offset {offset} below {SINGLE_FILE_OFFSET}")
    count = int(np.prod(shape))
    expected = offset + count * dtype.itemsize
    if len(raw) < expected:
        raise TruncatedFileError(f"{path.name}: expected {expected} bytes, got {len(raw)}")

    data = np.frombuffer(raw, dtype=dtype, count=count, offset=offset).reshape(shape, order="F")
    try:
        slope, inter = header.get_slope_inter()
        zooms = header.get_zooms()
        affine = header.get_best_affine()
    except HeaderDataError as exc:
        raise MalformedHeaderError(f"{path.name}: {exc}") from exc

    if slope is not None and (slope != 1 or inter != 0):
        data = data.astype(np.float64) * slope + inter
    elif not np.issubdtype(data.dtype, np.floating):
        data = data.astype(np.float64)
    data = data.astype(data.dtype.newbyteorder("="))

    spacing = tuple(float(z) if z > 0 else 1.0 for z in (tuple(zooms[:3]) + (1.0,) * 3)[:3])
    try:
        return Volume4D(data, spacing=spacing, affine=affine)
    except ValueError as exc:
        raise MalformedHeaderError(f"{path.name}: {exc}") from exc


def write_nifti(vol: Volume4D, path: Path | str) -> None:
    """Write ``vol`` as float32; single-volume data is stored as a 3D image."""
    path = Path(path)
    _check_extension(path)
    data = np.asarray(vol.data, dtype=np.float32)
    if vol.n_volumes == 1:
        data = data[..., 0]

    image = nib.Nifti1Image(data, np.asarray(vol.affine))
    image.header.set_data_dtype(np.float32)
    image.header.set_zooms((*vol.spacing, 1.0)[: data.ndim])
    payload = image.to_bytes()
    if _is_gzip(path):
        payload = gzip.compress(payload, mtime=0)

    atomic_write_bytes(path, payload)
    logger.debug("io.write", path=str(path), dims=vol.dims)


def read_mask(path: Path | str) -> Mask3D:
    """Mask from a 3D image file; voxels greater than zero are selected."""
    from dwiself.io import read_volume

    vol = read_volume(path)
    if vol.n_volumes != 1:
        raise DimensionError(f"{Path(path).name}: mask must be 3D, got {vol.n_volumes} volumes")
    return Mask3D(vol.data[..., 0] > 0)
