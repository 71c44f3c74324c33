from __future__ import annotations

import sys
from typing import Any, Callable, Generic, Sequence, TypeVar

import click
import rich_click

from dwiself.conf import settings
from dwiself.core.exceptions import EXIT_USAGE
from dwiself.phantom import PhantomSpec, default_phantom, load_phantom_spec, with_volume_count


__all__ = (
    "DwiselfGroup",
    "ListParamType",
    "FLOAT_LIST",
    "INT_LIST",
    "STR_LIST",
    "DIMS",
    "resolve_phantom",
)


T = TypeVar("T")


class DwiselfGroup(rich_click.RichGroup):
    """Root group whose exit status follows the failure family.

    Usage errors exit 1; other click exceptions (``CommandError`` included) exit
    with their own code; a command's integer return value becomes the exit status.
    """

    def main(  # type: ignore[override]
        self,
        args: Sequence[str] | None = None,
        prog_name: str | None = None,
        complete_var: str | None = None,
        standalone_mode: bool = True,
        **extra: Any,
    ) -> Any:
        if not standalone_mode:
            return super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        try:
            rv = super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        except click.UsageError as exc:
            exc.show()
            sys.exit(EXIT_USAGE)
        except click.ClickException as exc:
            exc.show()
            sys.exit(exc.exit_code)
        except click.exceptions.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_USAGE)
        sys.exit(rv if isinstance(rv, int) else 0)


class ListParamType(click.ParamType, Generic[T]):
    """Comma-separated list of values, e.g. ``10,15,20``."""

    def __init__(self, convert: Callable[[str], T], name: str) -> None:
        self._convert = convert
        self.name = name

    def convert(self, value: Any, param: click.Parameter | None, ctx: click.Context | None) -> list[T]:
        if isinstance(value, list):
            return value
        try:
            return [self._convert(item.strip()) for item in str(value).split(",") if item.strip()]
        except ValueError:
            self.fail(f"{value!r} is not a comma-separated list of {self.name} values", param, ctx)


class DimsParamType(click.ParamType):
    name = "L,W,H"

    def convert(self, value: Any, param: click.Parameter | None, ctx: click.Context | None) -> tuple[int, int, int]:
        if isinstance(value, tuple):
            return value
        try:
            dims = tuple(int(v) for v in str(value).replace("x", ",").split(","))
        except ValueError:
            dims = ()
        if len(dims) != 3:
            self.fail(f"{value!r} is not three comma-separated integers", param, ctx)
        return dims  # type: ignore[return-value]


FLOAT_LIST = ListParamType(float, "float")
INT_LIST = ListParamType(int, "integer")
STR_LIST = ListParamType(str, "text")
DIMS = DimsParamType()


def resolve_phantom(
    spec_path: Any = None,
    *,
    dims: tuple[int, int, int] | None = None,
    volumes: int | None = None,
    seed: int | None = None,
) -> PhantomSpec:
    """Phantom from ``--spec`` or the built-in default, sized to ``volumes`` if given."""
    if spec_path is not None:
        spec = load_phantom_spec(spec_path)
        if volumes is not None:
            spec = with_volume_count(spec, volumes)
        if seed is not None:
            spec = spec.model_copy(update={"seed": seed})
        return spec

    n_b0 = settings.PHANTOM_B0_VOLUMES
    directions = None
    if volumes is not None:
        n_b0 = min(n_b0, volumes - 1)
        directions = volumes - n_b0
    return default_phantom(dims, n_b0=n_b0, directions=directions, seed=seed)
