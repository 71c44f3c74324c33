from __future__ import annotations

from pathlib import Path

import rich_click as click
import structlog

from dwiself.cli.config import parse_config
from dwiself.conf import settings
from dwiself.core.exceptions import CommandError, DwiselfException, HoldoutError
from dwiself.denoise import DenoiseConfig
from dwiself.io import read_mask, read_volume, write_volume


__all__ = ("cmd_denoise",)

logger = structlog.get_logger()


@click.command(name="denoise")
@click.option(
    "-i", "--input", "input",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Noisy 4D volume (.nii, .nii.gz, .raw).",
)
@click.option(
    "-o", "--output", "output",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Where to write the denoised volume; written atomically.",
)
@click.option(
    "-r", "--radius", "radius",
    default=settings.DEFAULT_RADIUS,
    type=click.IntRange(min=0),
    show_default=True,
    help="Patch radius; each feature block is a (2r+1)^3 cube.",
)
@click.option(
    "-m", "--model", "model",
    default=settings.DEFAULT_MODEL,
    show_default=True,
    help="Regressor: ols, ridge, or the svd-rank-<r> baseline.",
)
@click.option(
    "--lambda", "lam",
    default=None,
    type=click.FloatRange(min=0),
    help="Ridge penalty. Required with --model ridge, rejected otherwise.",
)
@click.option(
    "--mask", "mask",
    default=None,
    type=click.Path(dir_okay=False, path_type=Path),
    help="3D mask file; only voxels > 0 are used for training and denoised.",
)
@click.option(
    "--passthrough", "passthrough",
    default=settings.PASSTHROUGH,
    type=click.Choice(["copy", "zero"]),
    show_default=True,
    help="Output value of voxels outside the mask.",
)
@click.option(
    "-j", "--threads", "threads",
    default=settings.THREADS,
    envvar=settings.THREADS_ENVVAR,
    type=click.IntRange(min=1),
    show_default=True,
    help=f"Hold-out fits run in parallel [env: {settings.THREADS_ENVVAR}].",
)
@click.option(
    "--chunk-rows", "chunk_rows",
    default=settings.CHUNK_ROWS,
    type=click.IntRange(min=1),
    show_default=True,
    help="Rows predicted per block.",
)
def cmd_denoise(radius: int, model: str, **params) -> int:
    """Denoise every volume of a 4D image from the other volumes."""
    cfg = parse_config("denoise", {"radius": [radius], "model": [model], **params})
    method = cfg.methods[0]
    try:
        vol = read_volume(cfg.input)
        if vol.n_volumes < 2:
            raise HoldoutError(f"at least 2 volumes required, got {vol.n_volumes}")
        mask = None
        if cfg.mask is not None:
            mask = read_mask(cfg.mask)
            mask.check_against(vol)
        denoise_cfg = DenoiseConfig(
            radius=cfg.radius[0],
            mask=mask,
            passthrough=cfg.passthrough,
            threads=cfg.threads,
            chunk_rows=cfg.chunk_rows,
        )
        denoised = method.run(vol, denoise_cfg)
        write_volume(denoised, cfg.output)
    except DwiselfException as exc:
        raise CommandError.from_exception(exc) from exc

    logger.info("denoise.done", method=method.label, output=str(cfg.output), dims=denoised.dims)
    return 0
