"""Spectra Module"""
from .interval import (
    BCKind, BoundaryCondition, IntervalProblem, WaveNumbers, wavenumbers, robin_residuals,
    perturbative_wavenumbers, union_identity_check, UnionIdentityReport
)
from .spectrum import Spectrum
from .domains import HalfDiscProblem, HemisphereProblem, half_disc_spectrum, hemisphere_spectrum
from .modes import (
    ModeIntegralReport, mode_integral_checks, perturbation_delta, normalization_squared
)
