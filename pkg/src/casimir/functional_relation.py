"""
Functional Relation Module
Small-h structure of the exact interval energies: sqrt(-h) term, slope and the F(lambda x) relation
"""

import math
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy import linalg

from config.settings import THREADS
from src.specfun import EULER_GAMMA, LOG2
from src.utils.errors import ValidationError
from .energy import ROBIN_PAIRS, casimir_exact_integral, normalize_pair

logger = logging.getLogger(__name__)

PROBE_LAMBDAS = (2.0, 4.0)
PROBE_MIN_POINTS = 4
PROBE_H_RANGE = (-0.1, 0.0)
SQRT_FIT_GRID = (-1e-3, -1e-5)
SQRT_FIT_POINTS = 16
SLOPE_AGREEMENT = 0.05


def _exact_energies(key: str, h_values: Sequence[float], threads: Optional[int] = None):
    """Exact energies and quadrature errors, evaluated in parallel in grid order."""
    workers = max(1, min(threads or THREADS, len(h_values)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda h: casimir_exact_integral(key, h), h_values))
    return (np.array([r.energy for r in results]),
            np.array([r.error_estimate for r in results]))


def _reference_energy(key: str) -> float:
    """h -> 0 limit of the exact energy."""
    return casimir_exact_integral(key, 0.0).energy


@dataclass
class RelationCheck:
    x: float
    scale: float
    lhs: float
    rhs: float

    @property
    def deviation(self) -> float:
        return abs(self.lhs - self.rhs)

    def to_record(self) -> Dict:
        return {"x": self.x, "lambda": self.scale, "lhs": self.lhs, "rhs": self.rhs,
                "deviation": self.deviation}


@dataclass
class FunctionalRelationReport:
    """F(lambda x) - lambda F(x) against (log lambda)/lambda on a grid of negative h."""
    pair: str
    h_grid: List[float]
    f_values: List[float]
    checks: List[RelationCheck]
    quadrature_tolerance: float
    reference_energy: float
    notes: List[str] = field(default_factory=list)

    @property
    def max_deviation(self) -> float:
        return max((c.deviation for c in self.checks), default=0.0)

    def deviation_at(self, scale: float) -> float:
        return max((c.deviation for c in self.checks if c.scale == scale), default=0.0)

    def to_record(self) -> Dict:
        return {
            "pair": self.pair,
            "h_grid": self.h_grid,
            "F": self.f_values,
            "checks": [c.to_record() for c in self.checks],
            "max_deviation": self.max_deviation,
            "quadrature_tolerance": self.quadrature_tolerance,
            "reference_energy": self.reference_energy,
            "notes": self.notes,
        }


def _find(grid: np.ndarray, value: float) -> Optional[int]:
    matches = np.nonzero(np.isclose(grid, value, rtol=1e-9, atol=0.0))[0]
    return int(matches[0]) if matches.size else None


def functional_relation_probe(pair: str, h_grid: Sequence[float],
                              threads: Optional[int] = None) -> FunctionalRelationReport:
    """
    Extract F(h) = 2 pi (E(h) - E0 - sqrt term)/h from the exact energies and test
    F(lambda x) - lambda F(x) = (log lambda)/lambda for lambda in {2, 4}.

    E0 is the h -> 0 limit of the exact energy; the sqrt term (1/2) sqrt(-h/pi)
    applies to N,R only. Deviations are reported, never raised.

    Args:
        pair: NR or DR
        h_grid: At least 4 values in (-0.1, 0), containing pairs x, lambda x
        threads: Worker threads for the quadratures

    Returns:
        FunctionalRelationReport
    """
    key = normalize_pair(pair)
    if key not in ROBIN_PAIRS:
        raise ValidationError("The probe applies to NR and DR", details={"pair": key})
    grid = np.asarray(sorted(float(h) for h in h_grid))
    lo, hi = PROBE_H_RANGE
    if grid.size < PROBE_MIN_POINTS or np.any(grid <= lo) or np.any(grid >= hi):
        raise ValidationError(f"h_grid needs >= {PROBE_MIN_POINTS} points in (-0.1, 0)",
                              details={"h_grid": grid.tolist()})

    energies, errors = _exact_energies(key, grid.tolist(), threads)
    reference = _reference_energy(key)
    sqrt_term = 0.5 * np.sqrt(-grid / math.pi) if key == "NR" else np.zeros_like(grid)
    f_values = 2.0 * math.pi * (energies - reference - sqrt_term) / grid

    checks = []
    for scale in PROBE_LAMBDAS:
        for i, x in enumerate(grid):
            j = _find(grid, scale * x)
            if j is not None:
                checks.append(RelationCheck(x=float(x), scale=scale,
                                            lhs=float(f_values[j] - scale * f_values[i]),
                                            rhs=math.log(scale) / scale))
    if not checks:
        raise ValidationError("h_grid contains no points related by lambda = 2 or 4",
                              details={"h_grid": grid.tolist()})
    # F carries a 2 pi / |h| amplification of the quadrature error
    tolerance = float(np.max(2.0 * math.pi * errors / np.abs(grid)))
    report = FunctionalRelationReport(pair=key, h_grid=grid.tolist(), f_values=f_values.tolist(),
                                      checks=checks, quadrature_tolerance=tolerance,
                                      reference_energy=reference)
    logger.info("Functional relation probe %s: max deviation %.3g", key, report.max_deviation)
    return report


@dataclass
class SqrtFitReport:
    """Least-squares coefficients of E(N,R)(h) - E(N,N) on negative h."""
    coefficients: Dict[str, float]
    expected_sqrt: float
    residual_rms: float
    h_grid: List[float]

    @property
    def sqrt_coefficient(self) -> float:
        return self.coefficients["sqrt(-h)"]

    @property
    def relative_error(self) -> float:
        return abs(self.sqrt_coefficient - self.expected_sqrt) / self.expected_sqrt

    def to_record(self) -> Dict:
        return {"coefficients": self.coefficients, "expected_sqrt": self.expected_sqrt,
                "relative_error": self.relative_error, "residual_rms": self.residual_rms,
                "h_grid": self.h_grid}


def sqrt_coefficient_fit(h_grid: Optional[Sequence[float]] = None,
                         threads: Optional[int] = None) -> SqrtFitReport:
    """
    Fit E(N,R)(h) - E(N,N) against sqrt(-h), h log(-h), h and (-h)^(3/2).

    The sqrt(-h) coefficient should be 1/(2 sqrt(pi)).
    """
    if h_grid is None:
        lo, hi = SQRT_FIT_GRID
        h_grid = -np.logspace(math.log10(-lo), math.log10(-hi), SQRT_FIT_POINTS)
    grid = np.asarray(sorted(float(h) for h in h_grid))
    if grid.size < 5 or np.any(grid >= 0):
        raise ValidationError("Need at least 5 negative h values", details={"size": int(grid.size)})
    energies, _ = _exact_energies("NR", grid.tolist(), threads)
    a = -grid
    target = energies - _reference_energy("NR")
    names = ["sqrt(-h)", "h log(-h)", "h", "(-h)^1.5"]
    design = np.column_stack([np.sqrt(a), -a * np.log(a), -a, a ** 1.5])
    scale = np.linalg.norm(design, axis=0)
    solution, _, _, _ = linalg.lstsq(design / scale, target)
    solution = solution / scale
    residual = target - design @ solution
    return SqrtFitReport(
        coefficients=dict(zip(names, solution.tolist())),
        expected_sqrt=0.5 / math.sqrt(math.pi),
        residual_rms=float(np.sqrt(np.mean(residual ** 2))),
        h_grid=grid.tolist(),
    )


def small_h_slope(pair: str = "DR", h: float = -1e-4) -> Dict:
    """
    Difference quotient (E(h) - E(0))/h of the exact energy against the
    perturbative slope; agreement within 5% is reported, not required.
    """
    key = normalize_pair(pair)
    if key not in ROBIN_PAIRS or not h < 0:
        raise ValidationError("Slope comparison needs NR or DR and h < 0",
                              details={"pair": key, "h": h})
    energy = casimir_exact_integral(key, h).energy
    reference = _reference_energy(key)
    if key == "NR":
        energy -= 0.5 * math.sqrt(-h / math.pi)
        perturbative = -(EULER_GAMMA - 1.0) / (2.0 * math.pi)
    else:
        perturbative = -(EULER_GAMMA - 1.0 + 2.0 * LOG2) / (2.0 * math.pi)
    slope = (energy - reference) / h
    relative = abs(slope - perturbative) / abs(perturbative)
    return {"pair": key, "h": h, "exact_slope": slope, "perturbative_slope": perturbative,
            "relative_difference": relative, "agrees": relative <= SLOPE_AGREEMENT}
