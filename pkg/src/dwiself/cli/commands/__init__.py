from .denoise import cmd_denoise
from .evaluate import cmd_evaluate
from .simulate import cmd_simulate
from .sweep import Sweep, cmd_sweep

__all__ = ["Sweep", "cmd_denoise", "cmd_evaluate", "cmd_simulate", "cmd_sweep"]
