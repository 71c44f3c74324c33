"""Multi-channel noise model.

The clean magnitude ``S`` is spread over ``C`` receive channels with uniform
sensitivity ``1/sqrt(C)`` as real parts. Independent ``N(0, sigma²)`` draws are
added to the real and imaginary part of every channel, and channels are combined
by root sum of squares. Draws come from one counter-based generator and are
consumed in ``(voxel, volume, channel, re/im)`` order, voxels in canonical order.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
import structlog

from dwiself.conf import settings
from dwiself.core.exceptions import ImproperlyConfigured, MaskError
from dwiself.phantom.schemas import NoiseSpec
from dwiself.volume import Mask3D, Volume4D


__all__ = ("make_rng", "resolve_sigma", "apply_noise", "measured_snr")

logger = structlog.get_logger()


def make_rng(seed: int) -> np.random.Generator:
    algorithms = {"Philox": np.random.Philox, "PCG64": np.random.PCG64}
    try:
        bit_generator = algorithms[settings.RNG_ALGORITHM]
    except KeyError as exc:
        raise ImproperlyConfigured(
            f"RNG_ALGORITHM must be one of {sorted(algorithms)}, got {settings.RNG_ALGORITHM!r}"
        ) from exc
    return np.random.Generator(bit_generator(seed))


def _reference_signal(
    clean: Volume4D, tissue: Mask3D | None, b0_indices: Sequence[int] | None
) -> float:
    b0 = list(b0_indices) if b0_indices else [0]
    b0_images = clean.data[..., b0]
    if tissue is None:
        flags = np.all(b0_images > 0, axis=-1)
    else:
        tissue.check_against(clean)
        flags = tissue.flags
    if not flags.any():
        raise MaskError("no tissue voxels to measure the b0 signal in")
    return float(b0_images[flags].mean())


def measured_snr(
    clean: Volume4D,
    sigma: float,
    tissue: Mask3D | None = None,
    b0_indices: Sequence[int] | None = None,
) -> float:
    """Mean clean b0 signal in tissue divided by the per-channel sigma."""
    return _reference_signal(clean, tissue, b0_indices) / sigma


def resolve_sigma(
    noise: NoiseSpec,
    clean: Volume4D,
    tissue: Mask3D | None = None,
    b0_indices: Sequence[int] | None = None,
) -> float:
    if noise.snr_target is None:
        return float(noise.sigma)
    return _reference_signal(clean, tissue, b0_indices) / noise.snr_target


def apply_noise(
    clean: Volume4D,
    noise: NoiseSpec,
    seed: int,
    *,
    tissue: Mask3D | None = None,
    b0_indices: Sequence[int] | None = None,
) -> Volume4D:
    sigma = resolve_sigma(noise, clean, tissue, b0_indices)
    logger.debug("phantom.noise", sigma=sigma, channels=noise.channels, seed=seed)
    if sigma == 0:
        # noiseless channels recombine to S; return it exactly
        return clean.with_data(clean.data)

    l, w, h, n = clean.dims
    channels = noise.channels
    rng = make_rng(seed)
    draws = rng.standard_normal((h, w, l, n, channels, 2)).transpose(2, 1, 0, 3, 4, 5)

    signal = np.asarray(clean.data, dtype=np.float64)[..., np.newaxis] / np.sqrt(channels)
    real = signal + sigma * draws[..., 0]
    imag = sigma * draws[..., 1]
    magnitude = np.sqrt(np.sum(real**2 + imag**2, axis=-1))
    return clean.with_data(magnitude)
