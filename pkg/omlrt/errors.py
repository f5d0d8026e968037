"""
Exception types raised by omlrt.

The CLI maps these to exit codes: configuration problems exit with 1,
numeric failures with 2 and verification runs where no time-domain
check could complete with 3.
"""

from typing import Optional


class OmlrtError(Exception):
    """Base class for every error raised by the library."""


class ConfigError(OmlrtError, ValueError):
    """Malformed parameter file, sweep definition or CLI request."""


class ParameterError(OmlrtError, ValueError):
    """Physical parameters violate an invariant required by an operation."""


class SingularDetuningError(ParameterError):
    """The mean-field solution needs a nonzero cavity detuning."""


class SingularityError(OmlrtError, ArithmeticError):
    """A susceptibility denominator or the inverted matrix is singular."""


class StabilityError(OmlrtError, ArithmeticError):
    """The characteristic-polynomial root finder did not converge."""

    def __init__(self, message: str, diagnostics: Optional[dict] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class StepSizeError(OmlrtError, ValueError):
    """The requested integration step is too coarse for the drift matrix."""


class UnstableSystemError(OmlrtError):
    """Time-domain integration refused because the linearised system grows."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class HorizonError(ParameterError):
    """The requested integration horizon needs more steps than MAX_STEPS."""
