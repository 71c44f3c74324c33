from __future__ import annotations

from typing import Any

import msgspec


__all__ = ("BaseStruct",)


class BaseStruct(msgspec.Struct):
    """Serialisable record; unset fields are left out of :meth:`to_dict`."""

    def to_dict(self) -> dict[str, Any]:
        return {
            f: getattr(self, f)
            for f in self.__struct_fields__
            if getattr(self, f, None) is not msgspec.UNSET
        }
