"""Bit-exact raw volume format.

Layout: a 39-byte little-endian header (``P2SRAW1`` magic, four ``uint32`` dims,
``uint32`` dtype code, three ``float32`` spacings) immediately followed by the
voxel data in canonical order.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import structlog

from dwiself.core.exceptions import (
    BadMagicError,
    DimensionError,
    DwiselfIOError,
    MalformedHeaderError,
    TruncatedFileError,
    UnsupportedDtypeError,
)
from dwiself.io._atomic import atomic_write_bytes
from dwiself.volume import CANONICAL_ORDER, Volume4D


__all__ = ("RAW_MAGIC", "RAW_HEADER", "RAW_DTYPES", "RawHeader", "read_raw", "write_raw")

logger = structlog.get_logger()

RAW_MAGIC = b"P2SRAW1"
RAW_HEADER = np.dtype(
    [("magic", "S7"), ("dims", "<u4", (4,)), ("dtype", "<u4"), ("spacing", "<f4", (3,))]
)
RAW_DTYPES = {1: np.dtype("<f4"), 2: np.dtype("<f8")}


class RawHeader:
    __slots__ = ("dims", "dtype_code", "spacing")

    def __init__(self, dims: tuple[int, int, int, int], dtype_code: int, spacing: tuple[float, float, float]) -> None:
        self.dims = dims
        self.dtype_code = dtype_code
        self.spacing = spacing

    @property
    def dtype(self) -> np.dtype:
        return RAW_DTYPES[self.dtype_code]

    @property
    def blob_size(self) -> int:
        return math.prod(self.dims) * self.dtype.itemsize

    def to_bytes(self) -> bytes:
        record = np.zeros((), dtype=RAW_HEADER)
        record["magic"] = RAW_MAGIC
        record["dims"] = self.dims
        record["dtype"] = self.dtype_code
        record["spacing"] = self.spacing
        return record.tobytes()

    @classmethod
    def from_bytes(cls, raw: bytes, name: str = "<raw>") -> RawHeader:
        if len(raw) < RAW_HEADER.itemsize:
            raise TruncatedFileError(
                f"{name}: expected {RAW_HEADER.itemsize} header bytes, got {len(raw)}"
            )
        record = np.frombuffer(raw, dtype=RAW_HEADER, count=1)[0]
        if bytes(record["magic"]) != RAW_MAGIC:
            raise BadMagicError(f"{name}: magic {bytes(record['magic'])!r} is not {RAW_MAGIC!r}")
        code = int(record["dtype"])
        if code not in RAW_DTYPES:
            raise UnsupportedDtypeError(f"{name}: dtype code {code}, expected 1 or 2")
        dims = tuple(int(d) for d in record["dims"])
        if any(d == 0 for d in dims):
            raise DimensionError(f"{name}: zero-sized dimension in {dims}")
        return cls(dims, code, tuple(float(s) for s in record["spacing"]))  # type: ignore[arg-type]


def write_raw(vol: Volume4D, path: Path | str) -> None:
    path = Path(path)
    code = 1 if vol.dtype == np.float32 else 2
    header = RawHeader(vol.dims, code, vol.spacing)
    blob = np.asarray(vol.data, dtype=header.dtype).tobytes(order=CANONICAL_ORDER)
    atomic_write_bytes(path, header.to_bytes() + blob)
    logger.debug("io.write", path=str(path), dims=vol.dims)


def read_raw(path: Path | str) -> Volume4D:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise DwiselfIOError(f"cannot read {path}: {exc.strerror or exc}") from exc

    header = RawHeader.from_bytes(raw, path.name)
    actual = len(raw) - RAW_HEADER.itemsize
    if actual < header.blob_size:
        raise TruncatedFileError(
            f"{path.name}: expected {header.blob_size} data bytes, got {actual}"
        )
    if actual > header.blob_size:
        raise MalformedHeaderError(
            f"{path.name}: {actual - header.blob_size} trailing bytes after the data"
        )

    try:
        data = np.frombuffer(raw, dtype=header.dtype, offset=RAW_HEADER.itemsize).reshape(
            header.dims, order=CANONICAL_ORDER
        )
        data = data.astype(data.dtype.newbyteorder("="))
        return Volume4D(data, spacing=header.spacing)
    except ValueError as exc:
        raise MalformedHeaderError(f"{path.name}: {exc}") from exc
