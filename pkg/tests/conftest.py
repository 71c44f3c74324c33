from __future__ import annotations

import numpy as np
import pytest
import structlog

from dwiself.conf import settings
from dwiself.phantom import build_phantom, default_phantom
from dwiself.testing import CliRunner, random_volume


@pytest.fixture(autouse=True)
def _fresh_settings():
    settings.reset()
    yield
    settings.reset()
    structlog.reset_defaults()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def noisy_volume():
    """10³ voxels × 6 volumes of positive random data."""
    return random_volume((10, 10, 10, 6), seed=7)


@pytest.fixture(scope="session")
def small_phantom():
    return build_phantom(default_phantom((10, 10, 10), n_b0=1, directions=7, seed=3))


PHANTOM_INI = """\
[phantom]
dims = 8, 8, 8
spacing = 2, 2, 2
seed = 11

[gradients]
b0 = 1
shells = 1000:5

[tissue:gm]
s0 = 100
diffusivity = 0.8e-3

[tissue:wm]
s0 = 80
evals = 1.7e-3, 0.3e-3, 0.3e-3
direction = 1, 0, 0

[region:brain]
shape = ellipsoid
center = 3.5, 3.5, 3.5
radii = 3.4, 3.4, 3.4
label = gm

[region:bundle]
shape = box
center = 3.5, 3.5, 3.5
radii = 3, 1, 1
label = wm
"""


@pytest.fixture
def phantom_ini(tmp_path):
    path = tmp_path / "phantom.ini"
    path.write_text(PHANTOM_INI)
    return path
