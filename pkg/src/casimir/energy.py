"""
Casimir Energy Module
Interval Casimir energies by finite-part zeta, perturbation theory and the exact integral
"""

import math
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

import numpy as np
from scipy import integrate, special

from config.settings import (
    CASIMIR_COUNT, CASIMIR_TAIL_TOL, QUAD_EPSABS, QUAD_EPSREL, QUAD_LIMIT
)
from src.specfun import EULER_GAMMA, riemann_zeta
from src.spectra import BoundaryCondition, IntervalProblem, wavenumbers
from src.utils.errors import ValidationError, PoleError, ConvergenceError, QuadratureError
from src.zetafns import perturbative_interval_zeta

logger = logging.getLogger(__name__)

STANDARD_ENERGIES = {"DD": -1.0 / 24.0, "NN": -1.0 / 24.0, "DN": 1.0 / 48.0}
ROBIN_PAIRS = ("NR", "DR")
MAX_FINITE_PART_H = 1.0
MIN_CASIMIR_COUNT = 100
# index where the remainder k - x - c1/x is sampled for the tail estimate
TAIL_REFERENCE_INDEX = 100
DR_INTEGRAL_SHIFT = 1.0 / 16.0
QUAD_ACCEPT = 1e-9

_ALIASES = {"ND": "DN", "RN": "NR", "RD": "DR"}


class CasimirRoute(Enum):
    """How an energy was obtained."""
    FINITE_PART = "finite_part"
    PERTURBATIVE = "perturbative"
    EXACT_INTEGRAL = "exact_integral"


@dataclass
class CasimirResult:
    """Casimir energy E = FP (1/2) zeta(-1/2) of a pi-interval, with its provenance."""
    energy: float
    route: CasimirRoute
    h: float
    pair: str
    notes: List[str] = field(default_factory=list)
    residue: Optional[float] = None
    error_estimate: float = 0.0
    details: Dict = field(default_factory=dict)

    def __post_init__(self):
        self.route = CasimirRoute(self.route)
        if not math.isfinite(self.energy):
            raise ConvergenceError("Casimir energy is not finite",
                                   details={"pair": self.pair, "h": self.h})

    def to_record(self) -> Dict:
        record = {
            "energy": self.energy,
            "route": self.route.value,
            "pair": self.pair,
            "h": self.h,
            "error_estimate": self.error_estimate,
            "notes": self.notes,
        }
        if self.residue is not None:
            record["residue"] = self.residue
        record.update(self.details)
        return record


def normalize_pair(pair: str) -> str:
    key = str(pair).upper()
    key = _ALIASES.get(key, key)
    if key not in STANDARD_ENERGIES and key not in ROBIN_PAIRS:
        raise ValidationError(f"Unknown interval pair '{pair}'",
                              details={"supported": sorted(STANDARD_ENERGIES) + list(ROBIN_PAIRS)})
    return key


def _problem(key: str, h: float) -> IntervalProblem:
    ends = {"D": BoundaryCondition.dirichlet(), "N": BoundaryCondition.neumann(),
            "R": BoundaryCondition.robin(h)}
    return IntervalProblem(ends[key[0]], ends[key[1]])


def _check_h(key: str, h: float):
    if not math.isfinite(h):
        raise ValidationError("h must be finite", details={"h": h})
    if key in STANDARD_ENERGIES and h != 0.0:
        raise ValidationError(f"{key} carries no Robin parameter", details={"h": h})


def casimir_finite_part(pair: str, h: float = 0.0, count: int = CASIMIR_COUNT) -> CasimirResult:
    """
    Casimir energy from the finite part of (1/2) zeta(-1/2).

    Each wavenumber is compared with its asymptotic form x + c1/x, x = m + c0,
    c1 = -h/pi. The subtracted sum converges like x^-3; the counterterms are
    continued through Hurwitz zetas:
    FP zeta(-1/2) = zeta_H(-1, c0) - c1 (1 + psi(c0)) + sum (k - x - c1/x),
    with the pole A/(s + 1/2), A = c1/2 = -h/(2 pi), removed.

    Args:
        pair: DD, NN, DN, DR or NR
        h: Robin strength, |h| <= 1 (0 for non-Robin pairs)
        count: Number of wavenumbers summed, at least 100

    Returns:
        CasimirResult with the removed residue

    Raises:
        ConvergenceError: If the estimated tail of the subtracted sum is too large
    """
    key = normalize_pair(pair)
    _check_h(key, h)
    if abs(h) > MAX_FINITE_PART_H:
        raise ValidationError("Finite-part route needs |h| <= 1", details={"h": h})
    if int(count) != count or count < MIN_CASIMIR_COUNT:
        raise ValidationError(f"count must be an integer >= {MIN_CASIMIR_COUNT}",
                              details={"count": count})

    roots = wavenumbers(_problem(key, h), int(count))
    k = roots.values
    notes = list(roots.notes)
    c1 = -h / math.pi
    isolated = 0.0

    if key in ("DN", "DR"):
        c0 = 1.5 if roots.excluded_imaginary else 0.5
    else:
        c0 = 1.0
        if key == "NR" and h < 0:
            # the lifted zero mode has no asymptotic partner
            isolated, k = float(k[0]), k[1:]
            notes.append(f"lowest root k0 = {isolated:.6g} summed separately")
    if roots.zero_mode_count:
        notes.append("zero mode contributes nothing")

    x = c0 + np.arange(k.size, dtype=float)
    remainder = k - x - c1 / x
    reference = min(TAIL_REFERENCE_INDEX, k.size - 1)
    tail_weight = remainder[reference] * x[reference] ** 3
    tail = tail_weight * riemann_zeta(3.0, x[-1] + 1.0)
    if abs(tail) > CASIMIR_TAIL_TOL:
        raise ConvergenceError("Subtracted root sum decays too slowly",
                               details={"pair": key, "h": h, "tail_estimate": tail,
                                        "count": int(count)})

    counterterms = riemann_zeta(-1.0, c0) - c1 * (1.0 + special.digamma(c0))
    finite = math.fsum(remainder.tolist()) + tail + counterterms + isolated
    energy = 0.5 * finite
    logger.info("Finite-part Casimir energy %s h=%g: %.12f", key, h, energy)
    return CasimirResult(
        energy=energy, route=CasimirRoute.FINITE_PART, h=h, pair=key, notes=notes,
        residue=0.5 * c1, error_estimate=abs(tail) + math.sqrt(k.size) * np.finfo(float).eps * float(k[-1]),
        details={"count": int(count), "c0": c0, "c1": c1, "tail_estimate": tail},
    )


def casimir_perturbative(pair: str, h: float = 0.0) -> CasimirResult:
    """
    First-order energies: E(N,R) = -1/24 - (h/2pi)(gamma - 1) [+ (1/2) sqrt(-h/pi) for h < 0],
    E(D,R) = 1/48 - (h/2pi)(gamma - 1 + 2 log 2).
    """
    key = normalize_pair(pair)
    _check_h(key, h)
    if key in STANDARD_ENERGIES:
        return CasimirResult(energy=STANDARD_ENERGIES[key], route=CasimirRoute.PERTURBATIVE,
                             h=0.0, pair=key, residue=0.0)
    zeta = perturbative_interval_zeta(key, h, -0.5)
    energy = 0.5 * zeta.value
    notes = ["drops O(h^2)"]
    if key == "NR" and h < 0:
        energy += 0.5 * math.sqrt(-h / math.pi)
        notes.append("includes the lifted zero mode (1/2) sqrt(-h/pi)")
    elif key == "NR" and h > 0:
        notes.append("negative mode omitted")
    return CasimirResult(energy=energy, route=CasimirRoute.PERTURBATIVE, h=h, pair=key,
                         notes=notes, residue=zeta.residue,
                         error_estimate=0.5 * zeta.error_estimate)


def _bose(k: float) -> float:
    """1/(e^(2 pi k) - 1)."""
    x = 2.0 * math.pi * k
    return math.exp(-x) if x > 50.0 else 1.0 / math.expm1(x)


def _integrand(key: str, h: float):
    if key == "NR":
        return lambda k: math.log1p(-2.0 * h * _bose(k) / (k - h)) if k > 0 else 0.0
    return lambda k: math.log1p(2.0 * k * _bose(k) / (k - h)) if k > 0 else 0.0


def exact_correction_integral(pair: str, h: float):
    """
    (1/2 pi) int_0^inf log(...) dk of the exact interval energy, with its error estimate.

    The integration range is split at |h|, sqrt(|h|/pi) and 1 so the k -> 0
    logarithmic endpoint and the sqrt(-h) scale are resolved separately.
    """
    key = normalize_pair(pair)
    if key not in ROBIN_PAIRS:
        raise ValidationError("The exact integral exists for NR and DR", details={"pair": key})
    if h > 0:
        raise PoleError("k = h lies on the integration contour for h > 0",
                        details={"pair": key, "h": h})
    func = _integrand(key, h)
    breaks = sorted({b for b in (abs(h), math.sqrt(abs(h) / math.pi), 1.0) if b > 0})
    edges = [0.0] + breaks
    total, error = [], 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        value, err = integrate.quad(func, lo, hi, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL,
                                    limit=QUAD_LIMIT)
        total.append(value)
        error += err
    value, err = integrate.quad(func, edges[-1], np.inf, epsabs=QUAD_EPSABS,
                                epsrel=QUAD_EPSREL, limit=QUAD_LIMIT)
    total.append(value)
    error += err
    integral = math.fsum(total) / (2.0 * math.pi)
    error /= 2.0 * math.pi
    if not math.isfinite(integral) or error > QUAD_ACCEPT:
        raise QuadratureError("Exact Casimir integral did not converge",
                              details={"pair": key, "h": h, "error": error})
    return integral, error


def casimir_exact_integral(pair: str, h: float) -> CasimirResult:
    """
    Exact interval energies for h <= 0.

    E(N,R) = E(N,N) + (1/2pi) int log(1 - 2h/((k-h)(e^(2 pi k) - 1))) dk
    E(D,R) = E(D,N) + (1/2pi) int log(1 + 2k/((k-h)(e^(2 pi k) - 1))) dk - 1/16

    The D,R integral equals 1/16 at h = 0, so E(D,R) reduces to E(D,N) there.

    Raises:
        PoleError: For h > 0
    """
    key = normalize_pair(pair)
    integral, error = exact_correction_integral(key, h)
    notes = ["may differ from the finite-part energy by a renormalisation"]
    if key == "NR":
        energy = STANDARD_ENERGIES["NN"] + integral
    else:
        energy = STANDARD_ENERGIES["DN"] + integral - DR_INTEGRAL_SHIFT
        notes.append("D,R integral carries the constant -1/16")
    logger.debug("Exact Casimir energy %s h=%g: %.12f (+- %.1e)", key, h, energy, error)
    return CasimirResult(energy=energy, route=CasimirRoute.EXACT_INTEGRAL, h=h, pair=key,
                         notes=notes, error_estimate=error, details={"integral": integral})


def c1_from_casimir(energy: float, h: float = 0.0) -> float:
    """Hemisphere C_1 from the interval energy: -8 pi E - pi/6 - 4h(gamma - 1)."""
    return -8.0 * math.pi * energy - math.pi / 6.0 - 4.0 * h * (EULER_GAMMA - 1.0)


def casimir_from_c1(c1: float, h: float = 0.0) -> float:
    """Inverse of c1_from_casimir."""
    return -(c1 + math.pi / 6.0 + 4.0 * h * (EULER_GAMMA - 1.0)) / (8.0 * math.pi)
