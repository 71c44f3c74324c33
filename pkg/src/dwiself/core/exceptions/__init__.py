"""
Global dwiself exception classes.

Every failure raised by the library is a :class:`DwiselfException`. Each family
carries the process exit code the command line reports for it. Validation errors
inside pydantic models are converted where the model is built.
"""

from __future__ import annotations

from typing import Any

from click import ClickException


__all__ = (
    "DwiselfException",
    "ImproperlyConfigured",
    "PhantomSpecError",
    "VolumeError",
    "MaskError",
    "HoldoutError",
    "ParameterError",
    "DwiselfIOError",
    "UnsupportedExtensionError",
    "UnsupportedDtypeError",
    "DimensionError",
    "TruncatedFileError",
    "MalformedHeaderError",
    "BadMagicError",
    "OutputWriteError",
    "NumericalError",
    "NonFiniteInputError",
    "ShapeMismatchError",
    "EmptyDesignError",
    "MetricError",
    "ConstantReferenceError",
    "CommandError",
    "EXIT_USAGE",
    "EXIT_IO",
    "EXIT_NUMERICAL",
)


EXIT_USAGE = 1
EXIT_IO = 2
EXIT_NUMERICAL = 3


class DwiselfException(Exception):
    detail: str
    exit_code: int = EXIT_USAGE

    def __init__(self, *args: Any, detail: str = "") -> None:
        """Initialize ``DwiselfException``.

        Args:
            *args: args are converted to :class:`str` before passing to :class:`Exception`
            detail: detail of the exception.
        """
        str_args = [str(arg) for arg in args if arg]
        if not detail:
            if str_args:
                detail, *str_args = str_args
            elif hasattr(self, "detail"):
                detail = self.detail
        self.detail = detail
        super().__init__(*str_args)

    def __repr__(self) -> str:
        if self.detail:
            return f"{self.__class__.__name__} - {self.detail}"
        return self.__class__.__name__

    def __str__(self) -> str:
        return " ".join((*self.args, self.detail)).strip()


class ImproperlyConfigured(DwiselfException):...

class PhantomSpecError(ImproperlyConfigured):
    """The phantom document is missing keys or violates a physical invariant."""


class VolumeError(DwiselfException, ValueError):
    """A 4D volume violates its shape or finiteness invariants."""


class MaskError(DwiselfException, ValueError):
    """A mask does not match its volume or selects nothing."""


class HoldoutError(DwiselfException, ValueError):
    """A hold-out index is out of range, or there are too few volumes."""


class ParameterError(DwiselfException, ValueError):
    """A library argument is out of range or names something unknown."""


class DwiselfIOError(DwiselfException, OSError):
    exit_code = EXIT_IO


class UnsupportedExtensionError(DwiselfIOError):...

class UnsupportedDtypeError(DwiselfIOError):...

class DimensionError(DwiselfIOError):...

class TruncatedFileError(DwiselfIOError):...

class MalformedHeaderError(DwiselfIOError):...

class BadMagicError(DwiselfIOError):...

class OutputWriteError(DwiselfIOError):...


class NumericalError(DwiselfException, ArithmeticError):
    exit_code = EXIT_NUMERICAL


class NonFiniteInputError(NumericalError):
    detail = "input contains NaN or infinite values"


class ShapeMismatchError(NumericalError):...


class EmptyDesignError(NumericalError):
    detail = "design matrix has zero rows"


class MetricError(NumericalError):...


class ConstantReferenceError(MetricError):
    detail = "R² is undefined for a constant reference"


class CommandError(ClickException, DwiselfException):
    """One-line CLI diagnostic carrying the exit code of the failure family."""

    def __init__(self, message: str, exit_code: int = EXIT_USAGE) -> None:
        ClickException.__init__(self, message)
        self.detail = message
        self.exit_code = exit_code

    def __str__(self) -> str:
        return self.message

    @classmethod
    def from_exception(cls, exc: DwiselfException) -> "CommandError":
        return cls(str(exc) or repr(exc), exit_code=exc.exit_code)
