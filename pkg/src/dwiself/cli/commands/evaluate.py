from __future__ import annotations

from pathlib import Path

import rich_click as click

from dwiself.cli.config import parse_config
from dwiself.cli.report import append_rows, format_rows, rows_from_report
from dwiself.core.exceptions import CommandError, DwiselfException
from dwiself.io import read_mask, read_volume
from dwiself.metrics import evaluate


__all__ = ("cmd_evaluate",)


@click.command(name="evaluate")
@click.option(
    "--reference", "reference",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Ground-truth volume.",
)
@click.option(
    "--estimate", "estimate",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Noisy or denoised volume scored against the reference.",
)
@click.option(
    "--mask", "mask",
    default=None,
    type=click.Path(dir_okay=False, path_type=Path),
    help="3D mask; adds a masked row ahead of the full-volume row.",
)
@click.option("--method", "method", default="estimate", show_default=True, help="Label for the method column.")
@click.option("--snr", "snr", default=None, type=float, help="Value for the snr column.")
@click.option(
    "--report", "report",
    default=None,
    type=click.Path(dir_okay=False, path_type=Path),
    help="CSV file the rows are appended to.",
)
@click.option("--per-volume", "per_volume", is_flag=True, help="Also emit one row per volume.")
def cmd_evaluate(snr: float | None, **params) -> int:
    """Score an estimate against a reference: RMSE and R²."""
    cfg = parse_config("evaluate", {**params, "snr": [snr] if snr is not None else None})
    try:
        reference = read_volume(cfg.reference)
        estimate = read_volume(cfg.estimate)
        scopes = [("full", None)]
        if cfg.mask is not None:
            scopes.insert(0, ("masked", read_mask(cfg.mask)))
        coords = {"snr": cfg.snr[0] if cfg.snr else None, "volumes": reference.n_volumes}
        rows = []
        for scope, mask in scopes:
            report = evaluate(reference, estimate, mask, per_volume=cfg.per_volume)
            rows.extend(rows_from_report(report, method=cfg.method, scope=scope, **coords))
        if cfg.report is not None:
            append_rows(cfg.report, rows)
    except DwiselfException as exc:
        raise CommandError.from_exception(exc) from exc

    click.echo(format_rows(rows), nl=False)
    return 0
