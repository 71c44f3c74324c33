from __future__ import annotations

from pathlib import Path

import numpy as np
import rich_click as click
import structlog

from dwiself.cli._utils import DIMS, FLOAT_LIST, resolve_phantom
from dwiself.cli.config import parse_config
from dwiself.conf import settings
from dwiself.core.exceptions import CommandError, DwiselfException, OutputWriteError
from dwiself.io import write_volume
from dwiself.io._atomic import atomic_write_text
from dwiself.phantom import NoiseSpec, build_phantom, resolve_sigma, simulate
from dwiself.utils import encode_json
from dwiself.volume import Volume4D


__all__ = ("cmd_simulate",)

logger = structlog.get_logger()


@click.command(name="simulate")
@click.option(
    "-o", "--output-dir", "output_dir",
    required=True,
    type=click.Path(file_okay=False, path_type=Path),
    help="Directory receiving the clean/noisy pairs, the mask and phantom.json.",
)
@click.option(
    "--spec", "spec",
    default=None,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Phantom INI document; the built-in phantom is used without it.",
)
@click.option(
    "--snr", "snr",
    default=None,
    type=FLOAT_LIST,
    help="Comma-separated SNR targets [default: 10,15,20,25,30 unless --sigma].",
)
@click.option(
    "--sigma", "sigma",
    default=None,
    type=click.FloatRange(min=0),
    help="Explicit per-channel noise standard deviation.",
)
@click.option(
    "--channels", "channels",
    default=settings.NOISE_CHANNELS,
    type=click.IntRange(min=1),
    show_default=True,
    help="Receive channels combined by sum of squares.",
)
@click.option(
    "--volumes", "volumes",
    default=None,
    type=click.IntRange(min=2),
    help="Total number of volumes (b0 + diffusion-weighted).",
)
@click.option("--dims", "dims", default=None, type=DIMS, help="Phantom grid size L,W,H.")
@click.option("--seed", "seed", default=None, type=int, help="Noise seed [default: the phantom's].")
@click.option(
    "--format", "fmt",
    default="nii",
    type=click.Choice(["nii", "nii.gz", "raw"]),
    show_default=True,
    help="Output file format.",
)
def cmd_simulate(snr, sigma, volumes, **params) -> int:
    """Write noise-free and noisy phantom volumes."""
    values = {**params, "snr": snr or (None if sigma is not None else list(settings.SWEEP_SNRS))}
    cfg = parse_config(
        "simulate", {**values, "sigma": sigma, "volumes": [volumes] if volumes else None}
    )
    ext = "." + cfg.fmt
    try:
        spec = resolve_phantom(
            cfg.spec,
            dims=cfg.dims,
            volumes=cfg.volumes[0] if cfg.volumes else None,
            seed=cfg.seed,
        )
        phantom = build_phantom(spec)
        try:
            cfg.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise OutputWriteError(f"cannot create {cfg.output_dir}: {exc.strerror or exc}") from exc

        levels: list[tuple[str, NoiseSpec]] = [
            (f"snr{value:g}", NoiseSpec(channels=cfg.channels, snr_target=value)) for value in cfg.snr
        ]
        if cfg.sigma is not None:
            levels.append((f"sigma{cfg.sigma:g}", NoiseSpec(channels=cfg.channels, sigma=cfg.sigma)))

        sigmas: dict[str, float] = {}
        for tag, noise in levels:
            noisy = simulate(phantom, noise)
            sigmas[tag] = resolve_sigma(noise, phantom.clean, phantom.tissue, spec.b0_indices)
            write_volume(phantom.clean, cfg.output_dir / f"clean_{tag}{ext}")
            write_volume(noisy, cfg.output_dir / f"noisy_{tag}{ext}")

        mask = Volume4D(phantom.tissue.flags.astype(np.float32), spacing=spec.spacing)
        write_volume(mask, cfg.output_dir / f"mask{ext}")
        echo = {
            "phantom": spec.model_dump(mode="json"),
            "channels": cfg.channels,
            "rng": settings.RNG_ALGORITHM,
            "sigma": sigmas,
        }
        atomic_write_text(cfg.output_dir / "phantom.json", encode_json(echo))
    except DwiselfException as exc:
        raise CommandError.from_exception(exc) from exc

    logger.info("simulate.done", output_dir=str(cfg.output_dir), levels=[tag for tag, _ in levels])
    return 0
