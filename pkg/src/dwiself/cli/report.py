"""Tidy CSV records shared by ``evaluate`` and ``sweep``."""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Iterable

import msgspec

from dwiself.conf import settings
from dwiself.contrib.base import BaseStruct
from dwiself.core.exceptions import DwiselfIOError, MalformedHeaderError
from dwiself.io._atomic import atomic_write_text
from dwiself.metrics import EvalReport


__all__ = ("CSV_COLUMNS", "SweepRow", "format_rows", "append_rows", "rows_from_report")


CSV_COLUMNS = (
    "schema_version",
    "snr",
    "volumes",
    "radius",
    "method",
    "scope",
    "rmse",
    "r2",
    "voxel_count",
    "status",
)


def _cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


class SweepRow(BaseStruct, frozen=True):
    method: str
    scope: str
    snr: float | None = None
    volumes: int | None = None
    radius: int | None = None
    rmse: float | None = None
    r2: float | None = None
    voxel_count: int | None = None
    status: str = "ok"
    schema_version: int = msgspec.field(default_factory=lambda: settings.CSV_SCHEMA_VERSION)

    @classmethod
    def failed(cls, method: str, message: str, scope: str = "masked", **coords: object) -> "SweepRow":
        first_line = message.strip().splitlines()[0] if message.strip() else "failed"
        return cls(method=method, scope=scope, status=f"error:{first_line}", **coords)  # type: ignore[arg-type]

    def cells(self) -> list[str]:
        values = self.to_dict()
        return [_cell(values[column]) for column in CSV_COLUMNS]


def rows_from_report(report: EvalReport, *, method: str, scope: str, **coords: object) -> list[SweepRow]:
    rows = [
        SweepRow(method=method, scope=scope, rmse=report.rmse, r2=report.r2, voxel_count=report.voxel_count, **coords)  # type: ignore[arg-type]
    ]
    if report.per_volume is not msgspec.UNSET:
        for score in report.per_volume:
            rows.append(
                SweepRow(
                    method=method,
                    scope=f"{scope}:volume-{score.volume}",
                    rmse=score.rmse,
                    r2=score.r2,
                    voxel_count=report.voxel_count,
                    **coords,  # type: ignore[arg-type]
                )
            )
    return rows


def format_rows(rows: Iterable[SweepRow], *, header: bool = True) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if header:
        writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.cells())
    return buffer.getvalue()


def append_rows(path: Path | str, rows: Iterable[SweepRow]) -> None:
    """Append ``rows`` to the CSV at ``path``, writing the header for a new file."""
    path = Path(path)
    existing = ""
    if path.exists():
        try:
            existing = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise DwiselfIOError(f"cannot read {path}: {exc.strerror or exc}") from exc
        first = existing.splitlines()[0] if existing else ""
        if first and first != ",".join(CSV_COLUMNS):
            raise MalformedHeaderError(f"{path}: existing CSV has a different header")
    atomic_write_text(path, existing + format_rows(rows, header=not existing))
