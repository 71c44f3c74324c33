from __future__ import annotations

from pathlib import Path
from typing import Annotated, Any, Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeFloat,
    NonNegativeInt,
    PositiveFloat,
    PositiveInt,
    ValidationError,
    model_validator,
)
from click import UsageError

from dwiself.conf import settings
from dwiself.denoise import Method, parse_method


__all__ = ("CliConfig", "parse_config")


Subcommand = Literal["simulate", "denoise", "evaluate", "sweep"]

_REQUIRED: dict[str, tuple[str, ...]] = {
    "simulate": ("output_dir",),
    "denoise": ("input", "output"),
    "evaluate": ("reference", "estimate"),
    "sweep": ("report",),
}


class CliConfig(BaseModel):
    """Validated flags of one command invocation.

    Cross-flag rules (``--lambda`` only with ridge, required paths per command) are
    checked here, before any file is read.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    subcommand: Subcommand
    input: Path | None = None
    output: Path | None = None
    output_dir: Path | None = None
    reference: Path | None = None
    estimate: Path | None = None
    report: Path | None = None
    mask: Path | None = None
    spec: Path | None = None

    radius: list[NonNegativeInt] = Field(default_factory=lambda: [settings.DEFAULT_RADIUS], min_length=1)
    model: list[str] = Field(default_factory=lambda: [settings.DEFAULT_MODEL], min_length=1)
    lam: NonNegativeFloat | None = None
    passthrough: Literal["copy", "zero"] = Field(default_factory=lambda: settings.PASSTHROUGH)
    threads: PositiveInt = Field(default_factory=lambda: settings.THREADS)
    chunk_rows: PositiveInt = Field(default_factory=lambda: settings.CHUNK_ROWS)

    seed: int | None = None
    snr: list[PositiveFloat] = Field(default_factory=list)
    sigma: NonNegativeFloat | None = None
    channels: PositiveInt = Field(default_factory=lambda: settings.NOISE_CHANNELS)
    volumes: list[Annotated[int, Field(ge=2)]] = Field(default_factory=list)
    dims: tuple[PositiveInt, PositiveInt, PositiveInt] | None = None
    fmt: Literal["nii", "nii.gz", "raw"] = "nii"

    method: str | None = None
    per_volume: bool = False

    @model_validator(mode="after")
    def _cross_flags(self) -> CliConfig:
        missing = [name for name in _REQUIRED[self.subcommand] if getattr(self, name) is None]
        if missing:
            flags = ", ".join("--" + name.replace("_", "-") for name in missing)
            raise ValueError(f"{self.subcommand} requires {flags}")
        if self.subcommand == "denoise" and (len(self.model) != 1 or len(self.radius) != 1):
            raise ValueError("denoise takes a single --model and --radius")
        if self.spec is not None and self.dims is not None:
            raise ValueError("--dims cannot be combined with --spec")
        if self.lam is not None and "ridge" not in self.model:
            raise ValueError("--lambda only applies to the ridge model")
        for name in self.model:
            parse_method(name, self.lam if name.strip().lower() == "ridge" else None)
        return self

    @property
    def methods(self) -> list[Method]:
        return [
            parse_method(name, self.lam if name.strip().lower() == "ridge" else None)
            for name in self.model
        ]


def parse_config(subcommand: Subcommand, params: dict[str, Any]) -> CliConfig:
    """Build a :class:`CliConfig` from click parameters, raising a usage error on failure."""
    values = {k: v for k, v in params.items() if v is not None and v != ()}
    try:
        return CliConfig(subcommand=subcommand, **values)
    except ValidationError as exc:
        error = exc.errors()[0]
        where = ".".join(str(p) for p in error["loc"])
        message = error["msg"].removeprefix("Value error, ")
        raise UsageError(f"{where}: {message}" if where else message) from exc
