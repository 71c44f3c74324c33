from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import rich_click as click
import structlog
from joblib import Parallel, delayed

from dwiself.cli._utils import DIMS, FLOAT_LIST, INT_LIST, STR_LIST, resolve_phantom
from dwiself.cli.config import CliConfig, parse_config
from dwiself.cli.report import SweepRow, append_rows, rows_from_report
from dwiself.conf import settings
from dwiself.core.exceptions import CommandError, DwiselfException
from dwiself.denoise import DenoiseConfig, Method
from dwiself.metrics import evaluate
from dwiself.phantom import NoiseSpec, Phantom, build_phantom, simulate, with_volume_count
from dwiself.volume import Volume4D


__all__ = ("Sweep", "cmd_sweep")

logger = structlog.get_logger()


@dataclass(frozen=True)
class Cell:
    snr: float
    volumes: int
    radius: int
    method: Method

    @property
    def coords(self) -> dict[str, object]:
        return {"snr": self.snr, "volumes": self.volumes, "radius": self.radius}


class Sweep:
    """Grid of simulate → denoise → evaluate runs over SNR, volume count, radius and method.

    Every dataset of a given volume count shares one phantom and one noise seed,
    so SNR levels differ only in noise scale. A failing cell becomes an error row
    and the grid carries on.
    """

    def __init__(self, cfg: CliConfig) -> None:
        self.cfg = cfg
        self.phantoms: dict[int, Phantom | Exception] = {}
        self.datasets: dict[tuple[float, int], Volume4D | Exception] = {}

    def cells(self) -> list[Cell]:
        return [
            Cell(snr, volumes, radius, method)
            for snr in self.cfg.snr
            for volumes in self.cfg.volumes
            for radius in self.cfg.radius
            for method in self.cfg.methods
        ]

    def _prepare(self) -> None:
        base = None
        if self.cfg.spec is not None:
            base = resolve_phantom(self.cfg.spec, seed=self.cfg.seed)
        for volumes in self.cfg.volumes:
            try:
                if base is not None:
                    spec = with_volume_count(base, volumes)
                else:
                    spec = resolve_phantom(dims=self.cfg.dims, volumes=volumes, seed=self.cfg.seed)
                self.phantoms[volumes] = build_phantom(spec)
            except DwiselfException as exc:
                self.phantoms[volumes] = exc
        for snr in self.cfg.snr:
            for volumes, phantom in self.phantoms.items():
                if isinstance(phantom, Exception):
                    self.datasets[(snr, volumes)] = phantom
                    continue
                try:
                    noise = NoiseSpec(channels=self.cfg.channels, snr_target=snr)
                    self.datasets[(snr, volumes)] = simulate(phantom, noise)
                except DwiselfException as exc:
                    self.datasets[(snr, volumes)] = exc

    def _baseline_rows(self) -> list[SweepRow]:
        rows = []
        for (snr, volumes), noisy in self.datasets.items():
            if isinstance(noisy, Exception):
                rows.append(SweepRow.failed("noisy", str(noisy), snr=snr, volumes=volumes))
                continue
            phantom = self.phantoms[volumes]
            for scope, mask in (("masked", phantom.tissue), ("full", None)):
                try:
                    report = evaluate(phantom.clean, noisy, mask)
                except DwiselfException as exc:
                    logger.warning("sweep.baseline", scope=scope, status="error", error=str(exc), snr=snr, volumes=volumes)
                    rows.append(SweepRow.failed("noisy", str(exc), scope=scope, snr=snr, volumes=volumes))
                    continue
                rows.extend(rows_from_report(report, method="noisy", scope=scope, snr=snr, volumes=volumes))
        return rows

    def run_cell(self, cell: Cell) -> list[SweepRow]:
        label = cell.method.label
        try:
            noisy = self.datasets[(cell.snr, cell.volumes)]
            if isinstance(noisy, Exception):
                raise noisy
            phantom = self.phantoms[cell.volumes]
            denoise_cfg = DenoiseConfig(
                radius=cell.radius, mask=phantom.tissue, threads=1, chunk_rows=self.cfg.chunk_rows
            )
            denoised = cell.method.run(noisy, denoise_cfg)
            rows = []
            for scope, mask in (("masked", phantom.tissue), ("full", None)):
                report = evaluate(phantom.clean, denoised, mask)
                rows.extend(rows_from_report(report, method=label, scope=scope, **cell.coords))
        except (DwiselfException, ValueError) as exc:
            logger.warning("sweep.cell", method=label, status="error", error=str(exc), **cell.coords)
            return [SweepRow.failed(label, str(exc) or type(exc).__name__, **cell.coords)]
        logger.info("sweep.cell", method=label, status="ok", **cell.coords)
        return rows

    def execute(self) -> list[SweepRow]:
        self._prepare()
        rows = self._baseline_rows()
        results = Parallel(n_jobs=self.cfg.threads, prefer="threads")(
            delayed(self.run_cell)(cell) for cell in self.cells()
        )
        for cell_rows in results:
            rows.extend(cell_rows)
        return rows


@click.command(name="sweep")
@click.option(
    "--report", "report",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="CSV file the grid rows are appended to.",
)
@click.option(
    "--snr", "snr",
    default=",".join(f"{s:g}" for s in settings.SWEEP_SNRS),
    type=FLOAT_LIST,
    show_default=True,
    help="SNR targets.",
)
@click.option(
    "--volumes", "volumes",
    default=str(settings.PHANTOM_B0_VOLUMES + settings.PHANTOM_DIRECTIONS),
    type=INT_LIST,
    show_default=True,
    help="Volume counts (b0 included).",
)
@click.option("--radius", "radius", default="0", type=INT_LIST, show_default=True, help="Patch radii.")
@click.option(
    "--model", "model",
    default=settings.DEFAULT_MODEL,
    type=STR_LIST,
    show_default=True,
    help="Models: ols, ridge, svd-rank-<r>.",
)
@click.option("--lambda", "lam", default=None, type=click.FloatRange(min=0), help="Ridge penalty for --model ridge.")
@click.option("--dims", "dims", default=None, type=DIMS, help="Phantom grid size L,W,H.")
@click.option("--seed", "seed", default=None, type=int, help="Phantom and noise seed.")
@click.option(
    "--channels", "channels",
    default=settings.NOISE_CHANNELS,
    type=click.IntRange(min=1),
    show_default=True,
    help="Receive channels combined by sum of squares.",
)
@click.option(
    "-j", "--threads", "threads",
    default=settings.THREADS,
    envvar=settings.THREADS_ENVVAR,
    type=click.IntRange(min=1),
    show_default=True,
    help=f"Grid cells run in parallel [env: {settings.THREADS_ENVVAR}].",
)
@click.option(
    "--spec", "spec",
    default=None,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Phantom INI document; volume counts take its first N gradients.",
)
def cmd_sweep(**params) -> int:
    """Run simulate, denoise and evaluate over a grid and write a tidy CSV."""
    cfg = parse_config("sweep", params)
    try:
        rows = Sweep(cfg).execute()
        append_rows(cfg.report, rows)
    except DwiselfException as exc:
        raise CommandError.from_exception(exc) from exc
    failed = sum(row.status != "ok" for row in rows)
    logger.info("sweep.done", rows=len(rows), failed=failed, report=str(cfg.report))
    return 0
