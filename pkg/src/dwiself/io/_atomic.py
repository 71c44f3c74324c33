from __future__ import annotations

import os
import tempfile
from pathlib import Path

from dwiself.core.exceptions import OutputWriteError


__all__ = ("atomic_write_bytes", "atomic_write_text")


def atomic_write_bytes(path: Path | str, payload: bytes) -> None:
    """Write ``payload`` to a temporary sibling of ``path``, then rename it into place."""
    path = Path(path)
    tmp_name = None
    try:
        with tempfile.NamedTemporaryFile(
            dir=path.parent, prefix=f".{path.name}.", suffix=".tmp", delete=False
        ) as fh:
            tmp_name = fh.name
            fh.write(payload)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp_name, path)
    except OSError as exc:
        if tmp_name is not None and os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise OutputWriteError(f"cannot write {path}: {exc.strerror or exc}") from exc


def atomic_write_text(path: Path | str, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))
