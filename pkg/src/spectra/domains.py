"""
Domain Spectra Module
Half-disc spectra from Bessel zeros and Robin-hemisphere spectra from interval roots
"""

import math
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from config.settings import LAMBDA_MAX_LIMIT, THREADS
from src.specfun import ZeroKind, bessel_j_zeros_below
from src.utils.errors import ValidationError
from .interval import BCKind, BoundaryCondition, IntervalProblem, wavenumbers
from .spectrum import Spectrum

logger = logging.getLogger(__name__)

HEMISPHERE_SHIFT = 0.25


def _plain_kind(value) -> BCKind:
    kind = BCKind(value.upper() if isinstance(value, str) else value)
    if kind == BCKind.ROBIN:
        raise ValidationError("Only Dirichlet or Neumann is allowed here")
    return kind


@dataclass(frozen=True)
class HalfDiscProblem:
    """Unit half-disc; the pair label is diameter condition then arc condition."""
    diameter_bc: BCKind
    arc_bc: BCKind
    radius: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "diameter_bc", _plain_kind(self.diameter_bc))
        object.__setattr__(self, "arc_bc", _plain_kind(self.arc_bc))
        if self.radius != 1.0:
            raise ValidationError("Half-disc radius is fixed to 1", details={"radius": self.radius})

    @classmethod
    def from_pair(cls, pair: str) -> "HalfDiscProblem":
        """'DN' means D on the diameter and N on the arc."""
        if len(pair) != 2:
            raise ValidationError("Half-disc pair must be two letters", details={"pair": pair})
        return cls(diameter_bc=pair[0], arc_bc=pair[1])

    @property
    def pair(self) -> str:
        return self.diameter_bc.value + self.arc_bc.value

    def to_record(self) -> Dict:
        return {"diameter_bc": self.diameter_bc.value, "arc_bc": self.arc_bc.value,
                "radius": self.radius}


@dataclass(frozen=True)
class HemisphereProblem:
    """Unit hemisphere, D or N on the phi=0 semicircle, Robin S = -h/sin(theta) on phi=pi."""
    bc_at_0: BCKind
    h: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "bc_at_0", _plain_kind(self.bc_at_0))
        if not math.isfinite(self.h):
            raise ValidationError("h must be finite", details={"h": self.h})

    def interval_problem(self) -> IntervalProblem:
        """Azimuthal interval problem whose wavenumbers set the Legendre orders."""
        return IntervalProblem(left=BoundaryCondition(self.bc_at_0),
                               right=BoundaryCondition.robin(self.h))

    def to_record(self) -> Dict:
        return {"bc_at_0": self.bc_at_0.value, "h": self.h}


def _check_cutoff(lambda_max: float):
    if not (0 < lambda_max <= LAMBDA_MAX_LIMIT):
        raise ValidationError(f"lambda_max must lie in (0, {LAMBDA_MAX_LIMIT:g}]",
                              details={"lambda_max": lambda_max})


def _worker_count(threads: Optional[int]) -> int:
    return max(1, int(threads or THREADS or os.cpu_count() or 1))


def half_disc_spectrum(problem: HalfDiscProblem, lambda_max: float,
                       threads: Optional[int] = None) -> Spectrum:
    """
    Laplacian eigenvalues of the unit half-disc up to lambda_max.

    Angular modes are sin(m phi), m >= 1, for a Dirichlet diameter and
    cos(m phi), m >= 0, for a Neumann diameter. Radial factors are J_m(k r)
    with k a zero of J_m (Dirichlet arc) or J'_m (Neumann arc). The constant
    mode of the all-Neumann problem is recorded as a zero mode.

    Args:
        problem: Condition pair
        lambda_max: Cutoff, at most 1e4
        threads: Worker threads for the per-order zero searches

    Returns:
        Spectrum of -Delta
    """
    _check_cutoff(lambda_max)
    k_max = math.sqrt(lambda_max)
    first_order = 1 if problem.diameter_bc == BCKind.DIRICHLET else 0
    kind = ZeroKind.FUNCTION if problem.arc_bc == BCKind.DIRICHLET else ZeroKind.DERIVATIVE
    # j_{m,1} > m and j'_{m,1} >= m, so no order above k_max contributes
    orders = list(range(first_order, int(math.floor(k_max)) + 1))

    def zeros_for(order: int) -> np.ndarray:
        return bessel_j_zeros_below(order, kind, k_max)

    with ThreadPoolExecutor(max_workers=_worker_count(threads)) as executor:
        per_order = list(executor.map(zeros_for, orders))

    values = np.concatenate([z ** 2 for z in per_order]) if per_order else np.empty(0)
    zero_modes = 1 if problem.pair == "NN" else 0
    spectrum = Spectrum.from_values(values[values <= lambda_max], cutoff=lambda_max,
                                    zero_mode_count=zero_modes, label=f"half-disc {problem.pair}")
    logger.info("Half-disc %s: %d modes below %g across %d orders",
                problem.pair, spectrum.mode_count, lambda_max, len(orders))
    return spectrum


def hemisphere_spectrum(problem: HemisphereProblem, lambda_max: float) -> Spectrum:
    """
    Eigenvalues of -Delta + 1/4 on the Robin hemisphere up to lambda_max.

    lambda_{mn} = (1/2 + k_m + n)^2 with k_m the azimuthal interval wavenumbers
    and n >= 0. A zero mode of the interval (N end, h = 0) contributes the
    k = 0 tower. Accidental coincidences are merged with summed degeneracy.
    """
    _check_cutoff(lambda_max)
    root_max = math.sqrt(lambda_max)
    interval = problem.interval_problem()
    waves = wavenumbers(interval, int(root_max) + 3)
    ks = waves.values[waves.values + 0.5 <= root_max]
    if waves.zero_mode_count:
        ks = np.concatenate(([0.0], ks))

    roots = []
    for k in ks:
        n = np.arange(int(math.floor(root_max - 0.5 - k)) + 1)
        roots.append(0.5 + k + n)
    root_values = np.concatenate(roots) if roots else np.empty(0)
    values = root_values ** 2
    spectrum = Spectrum.from_values(values[values <= lambda_max], cutoff=lambda_max,
                                    operator_shift=HEMISPHERE_SHIFT,
                                    label=f"hemisphere {problem.bc_at_0.value},R h={problem.h:g}",
                                    notes=waves.notes)
    logger.info("Hemisphere %s h=%g: %d modes below %g", problem.bc_at_0.value, problem.h,
                spectrum.mode_count, lambda_max)
    return spectrum
