from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from dwiself.phantom.schemas import PhantomSpec
from dwiself.volume import Mask3D, Volume4D


__all__ = ("Phantom", "label_map", "tissue_mask", "clean_signal", "build_phantom")


@dataclass(frozen=True, eq=False)
class Phantom:
    spec: PhantomSpec
    clean: Volume4D
    labels: np.ndarray
    tissue: Mask3D


def label_map(spec: PhantomSpec) -> np.ndarray:
    """Integer label per voxel: 0 is background, ``k`` is ``spec.tissues[k - 1]``.

    Regions are painted in order, so later regions overwrite earlier ones.
    """
    coords = np.meshgrid(*(np.arange(d, dtype=np.float64) for d in spec.dims), indexing="ij")
    labels = np.zeros(spec.dims, dtype=np.int32)
    for region in spec.regions:
        labels[region.contains(tuple(coords))] = spec.tissue_index(region.label) + 1
    return labels


def tissue_mask(spec: PhantomSpec) -> Mask3D:
    return Mask3D(label_map(spec) > 0)


def clean_signal(spec: PhantomSpec) -> Volume4D:
    """Noise-free single-tensor signal ``S0 exp(-b gᵀDg)``; background is 0."""
    labels = label_map(spec)
    bvals, bvecs = spec.bvals, spec.bvecs
    data = np.zeros((*spec.dims, spec.n_volumes), dtype=np.float64)
    for k, tissue in enumerate(spec.tissues, start=1):
        data[labels == k] = tissue.s0 * tissue.attenuation(bvals, bvecs)
    return Volume4D(data, spacing=spec.spacing)


def build_phantom(spec: PhantomSpec) -> Phantom:
    labels = label_map(spec)
    return Phantom(spec=spec, clean=clean_signal(spec), labels=labels, tissue=Mask3D(labels > 0))
