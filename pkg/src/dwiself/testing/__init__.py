from __future__ import annotations

from typing import Sequence

import numpy as np
from click.testing import CliRunner as ClickCliRunner
from click.testing import Result

from dwiself.volume import Volume4D


__all__ = [
    "CliRunner",
    "Result",
    "random_volume",
]


class CliRunner(ClickCliRunner):
    """Click runner bound to the ``dwiself`` command group."""

    def invoke_dwiself(self, *args: str, env: dict[str, str] | None = None) -> Result:
        from dwiself.cli import dwiself_cli

        return self.invoke(dwiself_cli, list(args), env=env, catch_exceptions=False)


def random_volume(
    dims: Sequence[int],
    *,
    seed: int = 0,
    loc: float = 100.0,
    scale: float = 10.0,
    spacing: tuple[float, float, float] = (1.0, 1.0, 1.0),
) -> Volume4D:
    """Gaussian test volume with a strictly positive mean level."""
    rng = np.random.default_rng(seed)
    return Volume4D(loc + scale * rng.standard_normal(tuple(dims)), spacing=spacing)
