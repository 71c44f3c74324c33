from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, NonNegativeFloat, PositiveFloat, PositiveInt, field_validator, model_validator

from dwiself.conf import settings
from dwiself.core.exceptions import ParameterError


__all__ = (
    "GradientEntry",
    "Tissue",
    "Region",
    "PhantomSpec",
    "NoiseSpec",
    "tensor_from_eigen",
)


UNIT_NORM_TOLERANCE = 1e-6

Vector3 = tuple[float, float, float]
Matrix3 = tuple[Vector3, Vector3, Vector3]


def tensor_from_eigen(evals: Vector3, direction: Vector3) -> Matrix3:
    """Symmetric tensor with principal axis ``direction`` and eigenvalues ``evals``.

    ``evals[0]`` is along ``direction``; the two others span its orthogonal plane.
    """
    e1 = np.asarray(direction, dtype=np.float64)
    norm = np.linalg.norm(e1)
    if norm == 0:
        raise ParameterError("principal direction must be non-zero")
    e1 = e1 / norm
    helper = np.eye(3)[int(np.argmin(np.abs(e1)))]
    e2 = np.cross(e1, helper)
    e2 /= np.linalg.norm(e2)
    e3 = np.cross(e1, e2)
    frame = np.column_stack([e1, e2, e3])
    tensor = frame @ np.diag(np.asarray(evals, dtype=np.float64)) @ frame.T
    tensor = (tensor + tensor.T) / 2
    return tuple(tuple(float(v) for v in row) for row in tensor)  # type: ignore[return-value]


class GradientEntry(BaseModel):
    """One acquired volume: b-value in s/mm² and unit gradient direction."""

    model_config = ConfigDict(frozen=True)

    b: NonNegativeFloat
    g: Vector3 = (0.0, 0.0, 0.0)

    @model_validator(mode="after")
    def _unit_direction(self) -> GradientEntry:
        if self.b > 0:
            norm = float(np.linalg.norm(self.g))
            if abs(norm - 1.0) > UNIT_NORM_TOLERANCE:
                raise ValueError(f"gradient direction {self.g} has norm {norm:.6g}, expected 1")
        return self


class Tissue(BaseModel):
    """Single-tensor tissue: baseline signal and diffusion tensor in mm²/s."""

    model_config = ConfigDict(frozen=True)

    label: str
    s0: PositiveFloat
    tensor: Matrix3

    @field_validator("tensor")
    @classmethod
    def _spd(cls, value: Matrix3) -> Matrix3:
        tensor = np.asarray(value, dtype=np.float64)
        scale = max(float(np.abs(tensor).max()), np.finfo(np.float64).tiny)
        if not np.allclose(tensor, tensor.T, rtol=0, atol=1e-9 * scale):
            raise ValueError("diffusion tensor must be symmetric")
        if np.linalg.eigvalsh(tensor).min() <= 0:
            raise ValueError("diffusion tensor must have positive eigenvalues")
        return value

    @classmethod
    def from_eigen(cls, label: str, s0: float, evals: Vector3, direction: Vector3 = (1.0, 0.0, 0.0)) -> Tissue:
        return cls(label=label, s0=s0, tensor=tensor_from_eigen(evals, direction))

    @classmethod
    def isotropic(cls, label: str, s0: float, diffusivity: float) -> Tissue:
        d = float(diffusivity)
        return cls(label=label, s0=s0, tensor=((d, 0.0, 0.0), (0.0, d, 0.0), (0.0, 0.0, d)))

    def attenuation(self, bvals: np.ndarray, bvecs: np.ndarray) -> np.ndarray:
        """``exp(-b gᵀDg)`` for every volume."""
        tensor = np.asarray(self.tensor, dtype=np.float64)
        quad = np.einsum("vi,ij,vj->v", bvecs, tensor, bvecs)
        return np.exp(-bvals * quad)


class Region(BaseModel):
    """Geometric primitive in voxel coordinates painted with a tissue label."""

    model_config = ConfigDict(frozen=True)

    name: str = ""
    shape: Literal["ellipsoid", "box"]
    center: Vector3
    radii: tuple[PositiveFloat, PositiveFloat, PositiveFloat]
    label: str

    def contains(self, coords: tuple[np.ndarray, np.ndarray, np.ndarray]) -> np.ndarray:
        scaled = [(c - c0) / r for c, c0, r in zip(coords, self.center, self.radii)]
        if self.shape == "ellipsoid":
            return sum(s**2 for s in scaled) <= 1.0
        return np.logical_and.reduce([np.abs(s) <= 1.0 for s in scaled])


class PhantomSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    dims: tuple[PositiveInt, PositiveInt, PositiveInt]
    spacing: tuple[PositiveFloat, PositiveFloat, PositiveFloat] = Field(
        default_factory=lambda: tuple(settings.PHANTOM_SPACING)
    )
    tissues: list[Tissue] = Field(min_length=1)
    regions: list[Region] = Field(min_length=1)
    gradients: list[GradientEntry] = Field(min_length=1)
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)

    @model_validator(mode="after")
    def _labels_resolve(self) -> PhantomSpec:
        labels = [t.label for t in self.tissues]
        if len(set(labels)) != len(labels):
            raise ValueError(f"tissue labels must be unique, got {labels}")
        for region in self.regions:
            if region.label not in labels:
                raise ValueError(f"region {region.name!r} uses unknown tissue {region.label!r}")
        return self

    @property
    def n_volumes(self) -> int:
        return len(self.gradients)

    @property
    def bvals(self) -> np.ndarray:
        return np.array([g.b for g in self.gradients], dtype=np.float64)

    @property
    def bvecs(self) -> np.ndarray:
        return np.array([g.g for g in self.gradients], dtype=np.float64).reshape(-1, 3)

    @property
    def b0_indices(self) -> list[int]:
        return [i for i, g in enumerate(self.gradients) if g.b == 0]

    def tissue_index(self, label: str) -> int:
        return [t.label for t in self.tissues].index(label)


class NoiseSpec(BaseModel):
    """Multi-channel complex Gaussian noise with sum-of-squares combination.

    ``sigma`` is the per-channel standard deviation of each of the real and
    imaginary parts. When ``snr_target`` is set it takes precedence and sigma is
    derived from the mean clean b0 signal inside tissue.
    """

    model_config = ConfigDict(frozen=True)

    channels: PositiveInt = Field(default_factory=lambda: settings.NOISE_CHANNELS)
    sigma: NonNegativeFloat = 0.0
    snr_target: PositiveFloat | None = None
