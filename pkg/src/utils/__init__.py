"""Utility Functions Module"""
from .errors import (SpectralError, ValidationError, ComputationError, PoleError,
                     ConvergenceError, BracketError, QuadratureError, IllConditionedError,
                     InsufficientCutoffError, AccuracyError, RouteDisagreementError,
                     MissingInputError, UnsupportedConfigurationError)
from .audit_logger import AuditLogger
from .helpers import *
