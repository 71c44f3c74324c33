from dwiself.phantom.gradients import (
    build_gradient_table,
    gradient_table_from_arrays,
    hemisphere_directions,
)
from dwiself.phantom.loader import (
    default_phantom,
    load_phantom_spec,
    parse_phantom_spec,
    with_volume_count,
)
from dwiself.phantom.noise import apply_noise, make_rng, measured_snr, resolve_sigma
from dwiself.phantom.schemas import (
    GradientEntry,
    NoiseSpec,
    PhantomSpec,
    Region,
    Tissue,
    tensor_from_eigen,
)
from dwiself.phantom.signal import Phantom, build_phantom, clean_signal, label_map, tissue_mask


__all__ = (
    "GradientEntry",
    "NoiseSpec",
    "Phantom",
    "PhantomSpec",
    "Region",
    "Tissue",
    "apply_noise",
    "build_gradient_table",
    "build_phantom",
    "clean_signal",
    "default_phantom",
    "gradient_table_from_arrays",
    "hemisphere_directions",
    "label_map",
    "load_phantom_spec",
    "make_rng",
    "measured_snr",
    "parse_phantom_spec",
    "resolve_sigma",
    "simulate",
    "tensor_from_eigen",
    "tissue_mask",
    "with_volume_count",
)


def simulate(phantom: Phantom, noise: NoiseSpec, seed: int | None = None):
    """Noisy realisation of ``phantom`` with SNR measured on its tissue b0 signal."""
    return apply_noise(
        phantom.clean,
        noise,
        phantom.spec.seed if seed is None else seed,
        tissue=phantom.tissue,
        b0_indices=phantom.spec.b0_indices,
    )
