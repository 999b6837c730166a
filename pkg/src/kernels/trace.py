"""
Trace Module
Heat and cylinder kernel traces of truncated spectra with certified tail bounds
"""

import math
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy import special

from config.settings import INTERVAL_MAX_COUNT, TAIL_TOLERANCE, TAIL_SAFETY_FACTOR, THREADS
from src.spectra import HemisphereProblem, IntervalProblem, Spectrum, wavenumbers
from src.utils.errors import ValidationError, InsufficientCutoffError, AccuracyError

logger = logging.getLogger(__name__)


class TraceKind(Enum):
    """Which kernel is traced."""
    HEAT = "heat"
    CYLINDER = "cylinder"


@dataclass
class TraceSamples:
    """Trace values on an ascending t grid."""
    t_values: np.ndarray
    k_values: np.ndarray
    kind: TraceKind
    truncation_bound: float = 0.0
    label: str = ""
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.t_values = np.asarray(self.t_values, dtype=float)
        self.k_values = np.asarray(self.k_values, dtype=float)
        self.kind = TraceKind(self.kind)
        if self.t_values.shape != self.k_values.shape or self.t_values.ndim != 1:
            raise ValidationError("t_values and k_values must be 1-d and equally long")
        if self.t_values.size and (self.t_values[0] <= 0 or np.any(np.diff(self.t_values) <= 0)):
            raise ValidationError("t_values must be positive and strictly increasing")

    def __len__(self) -> int:
        return int(self.t_values.size)

    def is_monotone(self) -> bool:
        """Traces of positive operators never increase with t."""
        return bool(np.all(np.diff(self.k_values) <= 0))

    def window(self, t_min: float, t_max: float) -> "TraceSamples":
        """Samples with t_min <= t <= t_max."""
        mask = (self.t_values >= t_min) & (self.t_values <= t_max)
        return TraceSamples(self.t_values[mask], self.k_values[mask], self.kind,
                            self.truncation_bound, self.label, list(self.notes))

    def to_records(self) -> List[Dict]:
        return [{"t": float(t), "trace": float(k)} for t, k in zip(self.t_values, self.k_values)]

    def to_record(self) -> Dict:
        return {
            "kind": self.kind.value,
            "label": self.label,
            "truncation_bound": self.truncation_bound,
            "samples": self.to_records(),
            "notes": self.notes,
        }

    @classmethod
    def from_record(cls, record: Dict) -> "TraceSamples":
        samples = record.get("samples", [])
        return cls(t_values=[s["t"] for s in samples], k_values=[s["trace"] for s in samples],
                   kind=record["kind"], truncation_bound=float(record.get("truncation_bound", 0.0)),
                   label=record.get("label", ""), notes=list(record.get("notes", [])))


def _growth_exponent(spectrum: Spectrum) -> float:
    """Local Weyl exponent p in N(lambda) ~ c lambda^p, read off the counted spectrum."""
    cutoff = spectrum.cutoff
    upper = spectrum.counting_function(cutoff)
    lower = spectrum.counting_function(cutoff / 4.0)
    if lower == 0 or upper <= lower:
        return 1.0
    return float(np.clip(math.log(upper / lower) / math.log(4.0), 0.5, 1.0))


def tail_bound(spectrum: Spectrum, t: float, kind: TraceKind) -> float:
    """
    Bound on the trace contribution of eigenvalues above the cutoff.

    The counted density below the cutoff fixes N(lambda) ~ c lambda^p; the
    omitted part is that density, inflated by a safety factor, integrated
    against the kernel from the cutoff to infinity.

    Args:
        spectrum: Truncated spectrum
        t: Kernel time
        kind: Heat or cylinder

    Returns:
        Absolute bound on the omitted part of the trace (0 for complete spectra)
    """
    cutoff = spectrum.cutoff
    if math.isinf(cutoff):
        return 0.0
    p = _growth_exponent(spectrum)
    c = max(spectrum.counting_function(cutoff), 1) / cutoff ** p
    if kind == TraceKind.HEAT:
        # integral of c p lambda^(p-1) e^(-lambda t) over (cutoff, inf)
        tail = c * p * special.gamma(p) * special.gammaincc(p, cutoff * t) * t ** (-p)
    else:
        # same in mu = sqrt(lambda): density 2 c p mu^(2p-1)
        q = 2.0 * p
        tail = 2.0 * c * p * special.gamma(q) * special.gammaincc(q, math.sqrt(cutoff) * t) * t ** (-q)
    return float(TAIL_SAFETY_FACTOR * tail)


def _trace_at(levels: np.ndarray, degeneracies: np.ndarray, zero_modes: int, t: float) -> float:
    terms = degeneracies * np.exp(-levels * t)
    return math.fsum(terms.tolist()) + zero_modes


def trace(spectrum: Spectrum, t_grid: Sequence[float], kind: TraceKind = TraceKind.HEAT,
          tail_tol: Optional[float] = None, check: bool = True,
          threads: Optional[int] = None) -> TraceSamples:
    """
    Evaluate K(t) = sum d e^(-lambda t) or T(t) = sum d e^(-sqrt(lambda) t).

    Args:
        spectrum: Truncated spectrum; zero modes add their count at every t
        t_grid: Positive times, any order
        kind: Heat or cylinder trace
        tail_tol: Allowed tail bound relative to the smallest trace value
        check: Enforce the tail criterion and monotonicity
        threads: Worker threads over the t grid

    Returns:
        TraceSamples with the uniform truncation bound

    Raises:
        InsufficientCutoffError: If the tail bound at the smallest t exceeds tail_tol
    """
    kind = TraceKind(kind)
    t_values = np.unique(np.asarray(t_grid, dtype=float))
    if t_values.size == 0 or t_values[0] <= 0 or not np.all(np.isfinite(t_values)):
        raise ValidationError("t grid must be nonempty, finite and positive")
    tail_tol = TAIL_TOLERANCE if tail_tol is None else tail_tol

    levels = spectrum.eigenvalues if kind == TraceKind.HEAT else np.sqrt(spectrum.eigenvalues)
    degeneracies = spectrum.degeneracies.astype(float)
    workers = max(1, int(threads or THREADS or 1))
    with ThreadPoolExecutor(max_workers=workers) as executor:
        values = list(executor.map(
            lambda t: _trace_at(levels, degeneracies, spectrum.zero_mode_count, t), t_values))
    k_values = np.array(values)

    # the tail bound is decreasing in t, so its value at t_min is uniform over the grid
    bound = tail_bound(spectrum, float(t_values[0]), kind)
    samples = TraceSamples(t_values, k_values, kind, truncation_bound=bound,
                           label=spectrum.label, notes=list(spectrum.notes))
    if check:
        if bound > tail_tol * float(np.min(np.abs(k_values))):
            raise InsufficientCutoffError(
                f"Tail bound {bound:.3g} too large for t_min={t_values[0]:g}; raise the cutoff",
                details={"cutoff": spectrum.cutoff, "t_min": float(t_values[0]),
                         "tail_bound": bound, "tail_tol": tail_tol})
        if not samples.is_monotone():
            raise AccuracyError("Trace is not monotone in t", details={"label": spectrum.label})
    logger.debug("%s trace of %s on %d points, tail bound %.3g",
                 kind.value, spectrum.label or "spectrum", t_values.size, bound)
    return samples


def interval_cylinder_trace(problem: IntervalProblem, t: float, count: Optional[int] = None) -> float:
    """
    T_I(t) = sum over interval wavenumbers of e^(-k t), zero mode included.

    The default count reaches k t >= 40; wavenumbers are spaced by pi/L.

    Raises:
        InsufficientCutoffError: If the default count exceeds the interval root limit
    """
    if not (t > 0 and math.isfinite(t)):
        raise ValidationError("t must be positive", details={"t": t})
    if count is None:
        count = math.ceil(40.0 * problem.length / (math.pi * t)) + 10
        if count > INTERVAL_MAX_COUNT:
            raise InsufficientCutoffError(
                "t is too small for the interval root limit",
                details={"t": t, "length": problem.length, "needed": count,
                         "limit": INTERVAL_MAX_COUNT})
    waves = wavenumbers(problem, count)
    return math.fsum(np.exp(-waves.values * t).tolist()) + waves.zero_mode_count


def hemisphere_cylinder_factorized(h: float, bc0, t: float, count: Optional[int] = None) -> float:
    """
    Hemisphere cylinder trace from the azimuthal interval alone.

    Roots 1/2 + k_m + n summed over n >= 0 give T_HS(t) = T_I(t) / (2 sinh(t/2)).

    Args:
        h: Robin strength on the phi = pi semicircle
        bc0: Dirichlet or Neumann on the phi = 0 semicircle
        t: Positive time
        count: Interval roots to sum (default keeps the omitted tail below e^-40)

    Returns:
        T_HS(t)
    """
    problem = HemisphereProblem(bc0, h).interval_problem()
    return interval_cylinder_trace(problem, t, count) / (2.0 * math.sinh(0.5 * t))
