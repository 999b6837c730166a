"""
Error Types Module
Exception hierarchy shared by every computation and the CLI exit codes
"""

from typing import Dict, Optional, Any


class SpectralError(Exception):
    """Base class for all toolkit errors."""

    exit_status = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_record(self) -> Dict[str, Any]:
        """Structured error record for machine-readable output."""
        return {
            "error": type(self).__name__,
            "message": self.message,
            "details": self.details,
            "exit_status": self.exit_status,
        }


class ValidationError(SpectralError, ValueError):
    """A precondition or input failed validation."""

    exit_status = 2


class ComputationError(SpectralError, ArithmeticError):
    """A numerical computation could not deliver a certified result."""

    exit_status = 1


class PoleError(ComputationError):
    """Evaluation requested at (or numerically on top of) a pole."""


class ConvergenceError(ComputationError):
    """A series, iteration or window selection failed to converge."""


class BracketError(ComputationError):
    """A root bracket did not change sign."""


class QuadratureError(ComputationError):
    """Adaptive quadrature did not reach the requested tolerance."""


class IllConditionedError(ComputationError):
    """A least-squares system exceeded the condition limit."""


class InsufficientCutoffError(ComputationError):
    """Spectral truncation error is too large for the requested traces."""


class AccuracyError(ComputationError):
    """A computed value failed its residual certification."""


class RouteDisagreementError(ComputationError):
    """Two independent routes to the same quantity disagree."""


class MissingInputError(ComputationError):
    """Inputs needed to determine some outputs are absent."""


class UnsupportedConfigurationError(ValidationError):
    """The requested configuration is outside what is implemented."""
