from dwiself.core.utils import setup_dwiself

setup_dwiself()  # settings module from dwiself.ini, if any

import rich_click as click

from dwiself.cli._utils import DwiselfGroup
from dwiself.cli.commands import cmd_denoise, cmd_evaluate, cmd_simulate, cmd_sweep
from dwiself.conf import settings
from dwiself.contrib.logger import configure_logging


__all__ = [
    "dwiself_cli",
    "DwiselfGroup",
]


@click.group(cls=DwiselfGroup, context_settings={"help_option_names": ["-h", "--help"]})
@click.option(
    "--log-level",
    "log_level",
    default=None,
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    help="Minimum level of the events written to standard error [default: from settings].",
)
def dwiself_cli(log_level: str | None) -> None:
    """Self-supervised denoising of 4D diffusion MRI, with a phantom and scoring harness."""
    configure_logging(log_level or settings.LOG_LEVEL)


@dwiself_cli.command(name="version")
def version_command() -> int:
    """Show the installed dwiself version and its numerical stack."""
    import nibabel
    import numpy
    import scipy

    from dwiself import __version__

    click.echo(
        "dwiself version: {}\nnumpy: {}\nscipy: {}\nnibabel: {}".format(
            __version__, numpy.__version__, scipy.__version__, nibabel.__version__
        )
    )
    return 0


dwiself_cli.add_command(cmd_simulate)
dwiself_cli.add_command(cmd_denoise)
dwiself_cli.add_command(cmd_evaluate)
dwiself_cli.add_command(cmd_sweep)
