"""
Interval Spectra Module
Wavenumbers of hybrid Dirichlet/Neumann/Robin problems on an interval
"""

import math
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from config.settings import (
    INTERVAL_MAX_COUNT, UNION_MAX_COUNT, ROBIN_RESIDUAL, PERTURBATIVE_MAX_H
)
from src.utils.errors import (
    ValidationError, BracketError, AccuracyError, UnsupportedConfigurationError
)

logger = logging.getLogger(__name__)

BISECTION_STEPS = 64


class BCKind(Enum):
    """Boundary condition type."""
    DIRICHLET = "D"
    NEUMANN = "N"
    ROBIN = "R"


@dataclass(frozen=True)
class BoundaryCondition:
    """Endpoint condition; h is carried only by Robin ends."""
    kind: BCKind
    h: Optional[float] = None

    def __post_init__(self):
        kind = BCKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind == BCKind.ROBIN:
            if self.h is None or not math.isfinite(self.h):
                raise ValidationError("Robin condition needs a finite h", details={"h": self.h})
            object.__setattr__(self, "h", float(self.h))
        elif self.h is not None:
            raise ValidationError(f"{kind.name.title()} condition carries no parameter",
                                  details={"h": self.h})

    @classmethod
    def dirichlet(cls) -> "BoundaryCondition":
        return cls(BCKind.DIRICHLET)

    @classmethod
    def neumann(cls) -> "BoundaryCondition":
        return cls(BCKind.NEUMANN)

    @classmethod
    def robin(cls, h: float) -> "BoundaryCondition":
        return cls(BCKind.ROBIN, h)

    @classmethod
    def from_record(cls, record) -> "BoundaryCondition":
        """Accept 'D', 'N', {'kind': 'R', 'h': 0.1} or an existing condition."""
        if isinstance(record, BoundaryCondition):
            return record
        if isinstance(record, str):
            return cls(BCKind(record.upper()))
        kind = BCKind(str(record.get("kind", "")).upper())
        return cls(kind, record.get("h") if kind == BCKind.ROBIN else None)

    def to_record(self) -> Dict:
        record = {"kind": self.kind.value}
        if self.kind == BCKind.ROBIN:
            record["h"] = self.h
        return record

    @property
    def label(self) -> str:
        return self.kind.value


@dataclass(frozen=True)
class IntervalProblem:
    """Interval of given length with one condition at each end."""
    left: BoundaryCondition
    right: BoundaryCondition
    length: float = math.pi

    def __post_init__(self):
        if not (self.length > 0 and math.isfinite(self.length)):
            raise ValidationError("Interval length must be positive", details={"length": self.length})
        robin_ends = sum(bc.kind == BCKind.ROBIN for bc in (self.left, self.right))
        if robin_ends > 1:
            raise UnsupportedConfigurationError("At most one Robin end is supported")
        if robin_ends == 1 and not math.isclose(self.length, math.pi, rel_tol=0, abs_tol=1e-15):
            raise UnsupportedConfigurationError("Robin ends are only supported on the pi-interval",
                                                details={"length": self.length})

    @classmethod
    def from_record(cls, record: Dict) -> "IntervalProblem":
        return cls(left=BoundaryCondition.from_record(record["left"]),
                   right=BoundaryCondition.from_record(record["right"]),
                   length=float(record.get("length", math.pi)))

    def to_record(self) -> Dict:
        return {"length": self.length, "left": self.left.to_record(),
                "right": self.right.to_record()}

    @property
    def pair(self) -> str:
        """Canonical pair label with any Robin end last: DD, NN, DN, DR or NR."""
        labels = sorted([self.left.label, self.right.label], key="DNR".index)
        return "".join(labels)

    @property
    def robin_h(self) -> Optional[float]:
        for bc in (self.left, self.right):
            if bc.kind == BCKind.ROBIN:
                return bc.h
        return None


@dataclass
class WaveNumbers:
    """Positive wavenumbers k_m of an interval problem."""
    values: np.ndarray
    zero_mode_count: int = 0
    excluded_imaginary: bool = False
    problem: Optional[IntervalProblem] = None
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.size and (self.values[0] <= 0 or np.any(np.diff(self.values) <= 0)):
            raise AccuracyError("Wavenumbers must be positive and strictly increasing")

    def __len__(self) -> int:
        return int(self.values.size)

    def to_spectrum(self) -> "Spectrum":
        """Eigenvalues k^2 of -d^2/dx^2, cut off at the last computed root."""
        from .spectrum import Spectrum

        label = self.problem.pair if self.problem else ""
        return Spectrum.from_values(self.values ** 2, cutoff=float(self.values[-1] ** 2),
                                    zero_mode_count=self.zero_mode_count,
                                    label=f"interval {label}", notes=self.notes)

    def to_record(self) -> Dict:
        return {
            "problem": self.problem.to_record() if self.problem else None,
            "values": self.values,
            "zero_mode_count": self.zero_mode_count,
            "excluded_imaginary": self.excluded_imaginary,
            "notes": self.notes,
        }


def _dr_condition(delta: np.ndarray, m: np.ndarray, h: float) -> np.ndarray:
    # k cot(k pi) = h with k = m + delta, multiplied through by sin(delta pi)
    return (m + delta) * np.cos(np.pi * delta) - h * np.sin(np.pi * delta)


def _dr_condition_m0(delta: np.ndarray, h: float) -> np.ndarray:
    # m = 0 branch divided by delta, so the trivial root delta = 0 disappears
    return np.cos(np.pi * delta) - h * np.pi * np.sinc(delta)


def _nr_condition(delta: np.ndarray, m: np.ndarray, h: float) -> np.ndarray:
    # k tan(k pi) = -h with k = m + delta, multiplied through by cos(delta pi)
    return (m + delta) * np.sin(np.pi * delta) + h * np.cos(np.pi * delta)


def _bisect(func, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Vectorized bisection on per-root brackets, then one guarded Newton step."""
    f_lo, f_hi = func(lo), func(hi)
    if np.any(f_lo * f_hi > 0):
        bad = int(np.argmax(f_lo * f_hi > 0))
        raise BracketError("Robin root bracket does not change sign",
                           details={"index": bad, "bracket": [float(lo[bad]), float(hi[bad])]})
    lo, hi = lo.copy(), hi.copy()
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        f_mid = func(mid)
        left = f_lo * f_mid <= 0
        hi = np.where(left, mid, hi)
        lo = np.where(left, lo, mid)
        f_lo = np.where(left, f_lo, f_mid)
    root = 0.5 * (lo + hi)
    f_root = func(root)
    step = 1e-7
    slope = (func(root + step) - func(root - step)) / (2 * step)
    with np.errstate(divide="ignore", invalid="ignore"):
        newton = root - f_root / slope
        improved = np.isfinite(newton) & (np.abs(func(newton)) < np.abs(f_root))
    return np.where(improved, newton, root)


def _robin_dr(h: float, count: int) -> Tuple[np.ndarray, bool, List[str]]:
    """Roots of k cot(k pi) = h, one per period bracket."""
    notes: List[str] = []
    if h == 0.0:
        return np.arange(count) + 0.5, False, notes
    if h < 0:
        # delta in (1/2, 1) for every m >= 0
        m = np.arange(count, dtype=float)
        deltas = _bisect(lambda d: _dr_condition(d, m, h), np.full(count, 0.5), np.ones(count))
        return m + deltas, False, notes

    # h > 0: delta in (0, 1/2); the m = 0 root exists only while h < 1/pi
    if h < 1.0 / math.pi:
        first = _bisect(lambda d: _dr_condition_m0(d, h), np.zeros(1), np.full(1, 0.5))
        m = np.arange(1, count, dtype=float)
        excluded = False
    else:
        first = np.empty(0)
        m = np.arange(1, count + 1, dtype=float)
        excluded = True
        notes.append("m=0 root of k cot(k pi) = h is imaginary for h >= 1/pi; excluded")
        logger.warning("(D,R) with h=%g >= 1/pi: lowest root is imaginary and excluded", h)
    rest = _bisect(lambda d: _dr_condition(d, m, h), np.zeros(m.size), np.full(m.size, 0.5))
    return np.concatenate((first, m + rest)), excluded, notes


def _robin_nr(h: float, count: int) -> Tuple[np.ndarray, bool, int, List[str]]:
    """Roots of k tan(k pi) = -h, one per period bracket."""
    notes: List[str] = []
    if h == 0.0:
        return np.arange(1, count + 1, dtype=float), False, 1, notes
    if h < 0:
        # delta in (0, 1/2) for every m >= 0; m = 0 is the small root near sqrt(-h/pi)
        m = np.arange(count, dtype=float)
        deltas = _bisect(lambda d: _nr_condition(d, m, h), np.zeros(count), np.full(count, 0.5))
        return m + deltas, False, 0, notes
    # h > 0: k_0 is imaginary; the real roots lie in (m - 1/2, m), m >= 1
    m = np.arange(1, count + 1, dtype=float)
    deltas = _bisect(lambda d: _nr_condition(d, m, h), np.full(count, -0.5), np.zeros(count))
    notes.append("m=0 mode of k tan(k pi) = -h is imaginary for h > 0; excluded")
    logger.info("(N,R) with h=%g > 0: imaginary k_0 excluded", h)
    return m + deltas, True, 0, notes


def wavenumbers(problem: IntervalProblem, count: int) -> WaveNumbers:
    """
    First `count` positive wavenumbers of an interval problem.

    Args:
        problem: Interval geometry and end conditions
        count: Number of wavenumbers (1 .. 10^5)

    Returns:
        WaveNumbers; the N,N constant mode is recorded as zero_mode_count,
        the imaginary Robin mode (if any) as excluded_imaginary
    """
    if int(count) != count or not (1 <= int(count) <= INTERVAL_MAX_COUNT):
        raise ValidationError(f"count must be an integer in [1, {INTERVAL_MAX_COUNT}]",
                              details={"count": count})
    count = int(count)
    scale = math.pi / problem.length
    pair = problem.pair
    notes: List[str] = []
    zero_modes, excluded = 0, False

    if pair == "DD":
        values = np.arange(1, count + 1) * scale
    elif pair == "NN":
        values = np.arange(1, count + 1) * scale
        zero_modes = 1
    elif pair == "DN":
        values = (np.arange(count) + 0.5) * scale
    elif pair == "DR":
        values, excluded, notes = _robin_dr(problem.robin_h, count)
    else:
        values, excluded, zero_modes, notes = _robin_nr(problem.robin_h, count)

    result = WaveNumbers(values=values, zero_mode_count=zero_modes,
                         excluded_imaginary=excluded, problem=problem, notes=notes)
    if problem.robin_h:
        residual = np.abs(robin_residuals(problem, result.values))
        # rounding k to a double moves the residual by about pi k^2 ulp
        allowed = ROBIN_RESIDUAL + 4.0 * np.pi * result.values ** 2 * np.finfo(float).eps
        if np.any(residual >= allowed):
            raise AccuracyError("Robin roots failed residual certification",
                                details={"max_residual": float(residual.max())})
    logger.debug("Computed %d wavenumbers for %s", len(result), pair)
    return result


def robin_residuals(problem: IntervalProblem, values) -> np.ndarray:
    """
    Residuals of the transcendental conditions at the given wavenumbers.

    (D,R): k cot(k pi) - h; (N,R): k tan(k pi) + h. Both are evaluated through
    the fractional part of k so large roots keep their accuracy.
    """
    h = problem.robin_h
    if h is None:
        raise ValidationError("Residuals are defined for Robin problems only")
    k = np.asarray(values, dtype=float)
    frac = k - np.round(k)
    angle = np.pi * frac
    if problem.pair == "DR":
        return k * np.cos(angle) / np.sin(angle) - h
    return k * np.tan(angle) + h


def perturbative_wavenumbers(problem: IntervalProblem, count: int) -> np.ndarray:
    """
    First-order small-h wavenumbers of a Robin problem.

    (D,R): m + 1/2 - 2h/((2m+1) pi); (N,R): m - h/(m pi) for m >= 1,
    plus k_0 = sqrt(-h/pi) when h < 0.
    """
    h = problem.robin_h
    if h is None:
        raise ValidationError("Perturbative wavenumbers need exactly one Robin end")
    if abs(h) >= PERTURBATIVE_MAX_H:
        raise ValidationError(f"Perturbation theory needs |h| < {PERTURBATIVE_MAX_H}",
                              details={"h": h})
    if count < 1:
        raise ValidationError("count must be positive", details={"count": count})
    if problem.pair == "DR":
        m = np.arange(count, dtype=float)
        return m + 0.5 - 2.0 * h / ((2.0 * m + 1.0) * math.pi)
    if h < 0:
        m = np.arange(1, count, dtype=float)
        return np.concatenate(([math.sqrt(-h / math.pi)], m - h / (m * math.pi)))
    m = np.arange(1, count + 1, dtype=float)
    return m - h / (m * math.pi)


@dataclass
class UnionIdentityResult:
    """Outcome of one spectral-union identity."""
    name: str
    lhs: str
    rhs: str
    compared: int
    max_mismatch: float
    exact_match: bool
    passed: bool


@dataclass
class UnionIdentityReport:
    length: float
    count: int
    identities: List[UnionIdentityResult]

    @property
    def max_mismatch(self) -> float:
        return max(r.max_mismatch for r in self.identities)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.identities)

def _spectrum_units(kind: str, factor: int, count: int) -> List[Fraction]:
    """
    First `count` modes of a spectrum on length factor*L, in units of pi/(2L).

    D,D: 2m/c (m >= 1); N,N: 0 then 2m/c; D,N: (2m+1)/c;
    periodic: 0 once, then 4n/c twice each.
    """
    c = Fraction(factor)
    if kind == "DD":
        return [2 * m / c for m in range(1, count + 1)]
    if kind == "NN":
        return [Fraction(0)] + [2 * m / c for m in range(1, count)]
    if kind == "DN":
        return [(2 * m + 1) / c for m in range(count)]
    units = [Fraction(0)]
    n = 1
    while len(units) < count:
        units.extend([4 * n / c, 4 * n / c])
        n += 1
    return units[:count]


def _halve(units: List[Fraction]) -> List[Fraction]:
    """Periodic multiset with each doubled level kept once."""
    out, seen = [], set()
    for u in units:
        if u not in seen:
            out.append(u)
            seen.add(u)
    return out


def _compare(lhs_parts: List[List[Fraction]], rhs: List[Fraction], unit: float,
             tol: float) -> Tuple[int, float, bool, bool]:
    # Each list holds every multiplicity strictly below its own last entry
    cutoff = min([part[-1] for part in lhs_parts] + [rhs[-1]])
    left = sorted(u for part in lhs_parts for u in part if u < cutoff)
    right = sorted(u for u in rhs if u < cutoff)
    if len(left) != len(right):
        return min(len(left), len(right)), math.inf, False, False
    exact = left == right
    left_f = np.array([float(u) for u in left]) * unit
    right_f = np.array([float(u) for u in right]) * unit
    diff = np.abs(left_f - right_f)
    mismatch = float(diff.max()) if diff.size else 0.0
    ok = exact and bool(np.all(diff <= tol * np.maximum(1.0, right_f)))
    return len(left), mismatch, exact, ok


def union_identity_check(length: float, count: int, tol: float = 1e-12) -> UnionIdentityReport:
    """
    Check the spectral-union identities on the first `count` wavenumbers.

      (D,N)_L + (D,D)_L = (D,D)_2L
      (D,N)_L + (N,N)_L = (N,N)_2L
      (D,D)_L + (N,N)_L = P_2L
      (D,N)_L + P_2L/2 = P_4L/2

    Zero modes count as k = 0. Multisets are compared exactly in rational
    units of pi/(2L) and again in floating point below the common cutoff.
    """
    if not (length > 0 and math.isfinite(length)):
        raise ValidationError("Interval length must be positive", details={"length": length})
    if int(count) != count or not (1 <= count <= UNION_MAX_COUNT):
        raise ValidationError(f"count must lie in [1, {UNION_MAX_COUNT}]", details={"count": count})
    count = int(count)

    unit = math.pi / (2.0 * length)
    dd_l, nn_l, dn_l = (_spectrum_units(kind, 1, count) for kind in ("DD", "NN", "DN"))
    dd_2l, nn_2l = _spectrum_units("DD", 2, count), _spectrum_units("NN", 2, count)
    p_2l = _spectrum_units("P", 2, count)
    p_4l = _spectrum_units("P", 4, 2 * count)

    specs = [
        ("relns_dd", "(D,N)_L + (D,D)_L", "(D,D)_2L", [dn_l, dd_l], dd_2l),
        ("relns_nn", "(D,N)_L + (N,N)_L", "(N,N)_2L", [dn_l, nn_l], nn_2l),
        ("relns2", "(D,D)_L + (N,N)_L", "P_2L", [dd_l, nn_l], p_2l),
        ("relns3", "(D,N)_L + P_2L/2", "P_4L/2", [dn_l, _halve(p_2l)], _halve(p_4l)),
    ]
    results = []
    for name, lhs, rhs, parts, target in specs:
        compared, mismatch, exact, ok = _compare(parts, target, unit, tol)
        results.append(UnionIdentityResult(name=name, lhs=lhs, rhs=rhs, compared=compared,
                                           max_mismatch=mismatch, exact_match=exact, passed=ok))
    report = UnionIdentityReport(length=length, count=count, identities=results)
    logger.info("Union identities at L=%g: max mismatch %.3g", length, report.max_mismatch)
    return report
