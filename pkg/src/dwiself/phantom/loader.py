"""Phantom documents: the built-in default and the INI text format.

See ``docs/phantom.md`` for the file schema.
"""

from __future__ import annotations

import configparser
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from dwiself.conf import settings
from dwiself.core.exceptions import DwiselfException, DwiselfIOError, PhantomSpecError
from dwiself.phantom.gradients import build_gradient_table, gradient_table_from_arrays
from dwiself.phantom.schemas import PhantomSpec, Region, Tissue


__all__ = ("default_phantom", "load_phantom_spec", "parse_phantom_spec", "with_volume_count")


def default_phantom(
    dims: tuple[int, int, int] | None = None,
    *,
    n_b0: int | None = None,
    directions: int | None = None,
    bvalue: float | None = None,
    shells: dict[float, int] | None = None,
    seed: int | None = None,
) -> PhantomSpec:
    """Brain-like ellipsoid with two orthogonal white-matter bundles and a CSF box.

    ``shells`` overrides ``directions``/``bvalue`` with a multi-shell protocol.
    """
    dims = tuple(int(d) for d in (dims or settings.PHANTOM_DIMS))
    n_b0 = settings.PHANTOM_B0_VOLUMES if n_b0 is None else n_b0
    if shells is None:
        count = settings.PHANTOM_DIRECTIONS if directions is None else directions
        shells = {float(bvalue or settings.PHANTOM_BVALUE): count}

    l, w, h = dims
    cx, cy, cz = (l - 1) / 2, (w - 1) / 2, (h - 1) / 2

    def radius(fraction: float, extent: int) -> float:
        return max(fraction * extent, 1.0)

    tissues = [
        Tissue.isotropic("gm", 100.0, 0.8e-3),
        Tissue.from_eigen("wm_x", 80.0, (1.7e-3, 0.3e-3, 0.3e-3), (1.0, 0.0, 0.0)),
        Tissue.from_eigen("wm_y", 80.0, (1.7e-3, 0.3e-3, 0.3e-3), (0.0, 1.0, 0.0)),
        Tissue.isotropic("csf", 150.0, 3.0e-3),
    ]
    regions = [
        Region(
            name="brain",
            shape="ellipsoid",
            center=(cx, cy, cz),
            radii=(radius(0.42, l), radius(0.42, w), radius(0.42, h)),
            label="gm",
        ),
        Region(
            name="bundle_x",
            shape="ellipsoid",
            center=(cx, cy - 0.12 * w, cz - 0.08 * h),
            radii=(radius(0.32, l), radius(0.08, w), radius(0.08, h)),
            label="wm_x",
        ),
        Region(
            name="bundle_y",
            shape="ellipsoid",
            center=(cx + 0.12 * l, cy, cz - 0.08 * h),
            radii=(radius(0.08, l), radius(0.32, w), radius(0.08, h)),
            label="wm_y",
        ),
        Region(
            name="ventricle",
            shape="box",
            center=(cx - 0.12 * l, cy + 0.12 * w, cz + 0.15 * h),
            radii=(radius(0.07, l), radius(0.07, w), radius(0.07, h)),
            label="csf",
        ),
    ]
    return PhantomSpec(
        dims=dims,
        tissues=tissues,
        regions=regions,
        gradients=build_gradient_table(n_b0, shells),
        seed=settings.DEFAULT_SEED if seed is None else seed,
    )


def with_volume_count(spec: PhantomSpec, n_volumes: int) -> PhantomSpec:
    """``spec`` restricted to its first ``n_volumes`` gradient entries."""
    if not 1 <= n_volumes <= spec.n_volumes:
        raise PhantomSpecError(
            f"phantom has {spec.n_volumes} volumes, cannot select {n_volumes}"
        )
    return spec.model_copy(update={"gradients": spec.gradients[:n_volumes]})


def _floats(raw: str, count: int | None = None) -> tuple[float, ...]:
    values = tuple(float(v) for v in raw.replace(",", " ").split())
    if count is not None and len(values) != count:
        raise ValueError(f"expected {count} numbers, got {len(values)} in {raw!r}")
    return values


def _parse_shells(raw: str) -> dict[float, int]:
    shells: dict[float, int] = {}
    for item in raw.split(","):
        item = item.strip()
        if not item:
            continue
        bvalue, _, count = item.partition(":")
        if not count:
            raise ValueError(f"shell entry {item!r} must look like <b-value>:<directions>")
        shells[float(bvalue)] = int(count)
    return shells


def _tissue(label: str, section: configparser.SectionProxy) -> Tissue:
    s0 = section.getfloat("s0")
    if s0 is None:
        raise ValueError(f"tissue {label!r} needs s0")
    if "tensor" in section:
        t = _floats(section["tensor"], 9)
        tensor = (t[0:3], t[3:6], t[6:9])
        return Tissue(label=label, s0=s0, tensor=tensor)
    if "evals" in section:
        direction = _floats(section.get("direction", "1, 0, 0"), 3)
        return Tissue.from_eigen(label, s0, _floats(section["evals"], 3), direction)
    if "diffusivity" in section:
        return Tissue.isotropic(label, s0, section.getfloat("diffusivity"))
    raise ValueError(f"tissue {label!r} needs tensor, evals or diffusivity")


def _gradients(section: configparser.SectionProxy, base: Path) -> list[Any]:
    if "bvals" in section or "bvecs" in section:
        from dwiself.io.gradients import read_bvals_bvecs

        bvals, bvecs = read_bvals_bvecs(base / section["bvals"], base / section["bvecs"])
        return gradient_table_from_arrays(bvals, bvecs)
    n_b0 = section.getint("b0", settings.PHANTOM_B0_VOLUMES)
    shells = _parse_shells(
        section.get("shells", f"{settings.PHANTOM_BVALUE}:{settings.PHANTOM_DIRECTIONS}")
    )
    return build_gradient_table(n_b0, shells)


def parse_phantom_spec(text: str, base: Path | str = ".") -> PhantomSpec:
    """Build a :class:`PhantomSpec` from INI ``text``.

    Relative ``bvals``/``bvecs`` paths are resolved against ``base``.
    """
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
        if not parser.has_section("phantom"):
            raise ValueError("missing [phantom] section")
        phantom = parser["phantom"]
        fields: dict[str, Any] = {
            "dims": tuple(int(v) for v in _floats(phantom["dims"], 3)),
            "tissues": [
                _tissue(name.split(":", 1)[1].strip(), parser[name])
                for name in parser.sections()
                if name.startswith("tissue:")
            ],
            "regions": [
                Region(
                    name=name.split(":", 1)[1].strip(),
                    shape=parser[name]["shape"].strip(),
                    center=_floats(parser[name]["center"], 3),
                    radii=_floats(parser[name]["radii"], 3),
                    label=parser[name]["label"].strip(),
                )
                for name in parser.sections()
                if name.startswith("region:")
            ],
        }
        if "spacing" in phantom:
            fields["spacing"] = _floats(phantom["spacing"], 3)
        if "seed" in phantom:
            fields["seed"] = phantom.getint("seed")
        if parser.has_section("gradients"):
            fields["gradients"] = _gradients(parser["gradients"], Path(base))
        else:
            fields["gradients"] = build_gradient_table(
                settings.PHANTOM_B0_VOLUMES,
                {settings.PHANTOM_BVALUE: settings.PHANTOM_DIRECTIONS},
            )
        return PhantomSpec(**fields)
    except DwiselfException:
        raise
    except ValidationError as exc:
        errors = "; ".join(
            f"{'.'.join(str(p) for p in e['loc']) or 'spec'}: {e['msg']}" for e in exc.errors()
        )
        raise PhantomSpecError(f"invalid phantom spec: {errors}") from exc
    except (configparser.Error, KeyError, ValueError) as exc:
        raise PhantomSpecError(f"invalid phantom spec: {exc}") from exc


def load_phantom_spec(path: Path | str) -> PhantomSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DwiselfIOError(f"cannot read phantom spec {path}: {exc.strerror or exc}") from exc
    return parse_phantom_spec(text, base=path.parent)
