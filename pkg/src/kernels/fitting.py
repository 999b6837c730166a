"""
Asymptotic Fitting Module
Short-time expansion coefficients from trace samples by weighted, column-scaled least squares
"""

import math
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg as la

from config.settings import CONDITION_LIMIT, TAIL_TOLERANCE, WINDOW_STABILITY
from src.utils.errors import (
    ValidationError, IllConditionedError, InsufficientCutoffError, ConvergenceError
)
from .trace import TraceKind, TraceSamples

logger = logging.getLogger(__name__)


def _is_half_integer(value: float) -> bool:
    return float(2 * value).is_integer()


def _exponent_label(p: float, log: bool = False) -> str:
    text = f"t^{p:g}"
    return f"{text} log t" if log else text


@dataclass(frozen=True)
class ExpansionBasis:
    """
    Columns t^p (plain) and t^q log t (log) of a short-time expansion.

    Heat traces in dimension d carry log terms only from t^((2-d)/2) on;
    cylinder traces only from t^(2-d).
    """
    plain_exponents: Tuple[float, ...]
    log_exponents: Tuple[float, ...] = ()
    kind: TraceKind = TraceKind.HEAT
    dimension: int = 2

    def __post_init__(self):
        object.__setattr__(self, "plain_exponents", tuple(float(p) for p in self.plain_exponents))
        object.__setattr__(self, "log_exponents", tuple(float(q) for q in self.log_exponents))
        object.__setattr__(self, "kind", TraceKind(self.kind))
        for name, exps in (("plain", self.plain_exponents), ("log", self.log_exponents)):
            if any(not _is_half_integer(p) for p in exps):
                raise ValidationError(f"{name} exponents must be half-integers", details={name: exps})
            if any(b <= a for a, b in zip(exps, exps[1:])):
                raise ValidationError(f"{name} exponents must be strictly increasing",
                                      details={name: exps})
        if not self.plain_exponents and not self.log_exponents:
            raise ValidationError("Basis has no columns")
        lowest = self.lowest_log_exponent
        if self.log_exponents and self.log_exponents[0] < lowest:
            raise ValidationError(f"Log columns start at t^{lowest:g} in dimension {self.dimension}",
                                  details={"log_exponents": self.log_exponents})

    @property
    def lowest_log_exponent(self) -> float:
        if self.kind == TraceKind.HEAT:
            return (2 - self.dimension) / 2.0
        return float(2 - self.dimension)

    @property
    def column_count(self) -> int:
        return len(self.plain_exponents) + len(self.log_exponents)

    def with_log(self, log_exponents: Sequence[float]) -> "ExpansionBasis":
        return ExpansionBasis(self.plain_exponents, tuple(log_exponents), self.kind, self.dimension)

    def to_record(self) -> Dict:
        return {"plain": list(self.plain_exponents), "log": list(self.log_exponents),
                "kind": self.kind.value, "dimension": self.dimension}

    @classmethod
    def from_record(cls, record: Dict) -> "ExpansionBasis":
        return cls(tuple(record["plain"]), tuple(record.get("log", ())),
                   record.get("kind", "heat"), int(record.get("dimension", 2)))


@dataclass
class AsymptoticFit:
    """Result of one expansion fit."""
    coefficients: Dict[float, float]
    log_coefficients: Dict[float, float]
    standard_errors: Dict[str, float]
    pinned: Dict[float, float]
    residual_rms: float
    condition_estimate: float
    window: Tuple[float, float]
    points: int
    basis: ExpansionBasis
    notes: List[str] = field(default_factory=list)

    def coefficient(self, exponent: float, log: bool = False) -> float:
        table = self.log_coefficients if log else self.coefficients
        return table[float(exponent)]

    def evaluate(self, t) -> np.ndarray:
        """Fitted expansion, pinned terms included."""
        t = np.asarray(t, dtype=float)
        total = np.zeros_like(t)
        for p, c in self.coefficients.items():
            total += c * t ** p
        for q, c in self.log_coefficients.items():
            total += c * t ** q * np.log(t)
        return total

    def to_record(self) -> Dict:
        return {
            "basis": self.basis.to_record(),
            "coefficients": {_exponent_label(p): c for p, c in self.coefficients.items()},
            "log_coefficients": {_exponent_label(q, True): c for q, c in self.log_coefficients.items()},
            "standard_errors": self.standard_errors,
            "pinned": {_exponent_label(p): c for p, c in self.pinned.items()},
            "residual_rms": self.residual_rms,
            "condition_estimate": self.condition_estimate,
            "window": list(self.window),
            "points": self.points,
            "notes": self.notes,
        }


def _columns(t: np.ndarray, plain: Sequence[float], log: Sequence[float]) -> np.ndarray:
    log_t = np.log(t)
    cols = [t ** p for p in plain] + [t ** q * log_t for q in log]
    return np.column_stack(cols)


def fit_expansion(samples: TraceSamples, basis: ExpansionBasis,
                  pinned: Optional[Dict[float, float]] = None,
                  window: Union[None, str, Tuple[float, float]] = None,
                  condition_limit: Optional[float] = None,
                  tail_tol: Optional[float] = None) -> AsymptoticFit:
    """
    Fit trace samples to the expansion basis.

    Residuals are weighted by 1/K(t) so every sample counts relatively.
    Pinned plain coefficients are subtracted before solving; the remaining
    columns are scaled to unit norm and the system is solved through its SVD,
    which also supplies the condition estimate and standard errors.

    Args:
        samples: Trace samples
        basis: Columns to fit
        pinned: Exponent -> known value for plain columns held fixed
        window: (t_min, t_max), "auto" for nested-window selection, or None for all samples
        condition_limit: Largest acceptable condition number of the scaled system
        tail_tol: Allowed truncation bound relative to the smallest sample

    Returns:
        AsymptoticFit

    Raises:
        IllConditionedError: If the scaled system is too ill-conditioned
        InsufficientCutoffError: If the samples' truncation bound is too large
    """
    if window == "auto":
        return select_window(samples, basis, pinned=pinned, condition_limit=condition_limit,
                             tail_tol=tail_tol)
    pinned = {float(p): float(v) for p, v in (pinned or {}).items()}
    unknown = [p for p in pinned if p not in basis.plain_exponents]
    if unknown:
        raise ValidationError("Pinned exponents must be plain basis columns", details={"pinned": unknown})
    condition_limit = CONDITION_LIMIT if condition_limit is None else condition_limit
    tail_tol = TAIL_TOLERANCE if tail_tol is None else tail_tol

    if window is not None:
        samples = samples.window(*window)
    t, k = samples.t_values, samples.k_values
    free_plain = [p for p in basis.plain_exponents if p not in pinned]
    free_count = len(free_plain) + len(basis.log_exponents)
    if free_count == 0:
        raise ValidationError("Every column is pinned; nothing to fit")
    if t.size < 2 * free_count:
        raise ValidationError(f"Need at least {2 * free_count} samples, got {t.size}",
                              details={"window": window})
    if np.any(k <= 0):
        raise ValidationError("Relative weighting needs positive trace values")
    if samples.truncation_bound >= tail_tol * float(k.min()):
        raise InsufficientCutoffError("Samples are not certified to the fitting tolerance",
                                      details={"truncation_bound": samples.truncation_bound,
                                               "tail_tol": tail_tol})

    target = k - sum(v * t ** p for p, v in pinned.items()) if pinned else k.copy()
    design = _columns(t, free_plain, basis.log_exponents) / k[:, None]
    rhs = target / k
    norms = np.linalg.norm(design, axis=0)
    if np.any(norms == 0):
        raise IllConditionedError("A basis column vanishes on the window")
    scaled = design / norms

    u, s, vt = la.svd(scaled, full_matrices=False)
    condition = float(s[0] / s[-1]) if s[-1] > 0 else math.inf
    if condition > condition_limit:
        raise IllConditionedError(f"Condition estimate {condition:.3g} exceeds {condition_limit:.3g}",
                                  details={"condition_estimate": condition,
                                           "basis": basis.to_record()})
    solution = vt.T @ ((u.T @ rhs) / s)
    values = solution / norms

    residual = rhs - scaled @ solution
    dof = t.size - free_count
    sigma2 = float(residual @ residual) / dof
    covariance = (vt.T / s ** 2) @ vt
    errors = np.sqrt(np.maximum(np.diag(covariance) * sigma2, 0.0)) / norms

    coefficients = dict(pinned)
    coefficients.update({p: float(v) for p, v in zip(free_plain, values[:len(free_plain)])})
    coefficients = dict(sorted(coefficients.items()))
    log_coefficients = {q: float(v) for q, v in zip(basis.log_exponents, values[len(free_plain):])}
    labels = [_exponent_label(p) for p in free_plain] + \
             [_exponent_label(q, True) for q in basis.log_exponents]

    fit = AsymptoticFit(
        coefficients=coefficients,
        log_coefficients=log_coefficients,
        standard_errors={label: float(e) for label, e in zip(labels, errors)},
        pinned=pinned,
        residual_rms=float(np.sqrt(np.mean(residual ** 2))),
        condition_estimate=condition,
        window=(float(t[0]), float(t[-1])),
        points=int(t.size),
        basis=basis,
    )
    logger.debug("Fit of %d columns on [%g, %g]: rms %.3g, condition %.3g",
                 free_count, t[0], t[-1], fit.residual_rms, condition)
    return fit


def _stable(first: AsymptoticFit, second: AsymptoticFit, stability: float) -> bool:
    pairs = [(first.coefficients[p], second.coefficients[p]) for p in first.coefficients
             if p not in first.pinned]
    pairs += [(first.log_coefficients[q], second.log_coefficients[q]) for q in first.log_coefficients]
    return all(abs(a - b) <= stability * max(abs(a), abs(b), 0.1) for a, b in pairs)


def select_window(samples: TraceSamples, basis: ExpansionBasis,
                  pinned: Optional[Dict[float, float]] = None, shrink: float = 0.8,
                  max_steps: int = 8, stability: float = WINDOW_STABILITY,
                  condition_limit: Optional[float] = None,
                  tail_tol: Optional[float] = None) -> AsymptoticFit:
    """
    Shrink t_max until two successive fits agree.

    Returns the wider of the first agreeing pair.

    Raises:
        ConvergenceError: If no pair of nested windows agrees
    """
    t_min, t_max = float(samples.t_values[0]), float(samples.t_values[-1])
    previous = None
    for step in range(max_steps):
        upper = t_max * shrink ** step
        window = samples.window(t_min, upper)
        free = basis.column_count - len(pinned or {})
        if len(window) < 2 * free:
            break
        fit = fit_expansion(window, basis, pinned=pinned, condition_limit=condition_limit,
                            tail_tol=tail_tol)
        if previous is not None and _stable(previous, fit, stability):
            previous.notes.append(f"window agreed with t_max={upper:g} to {stability:g}")
            return previous
        previous = fit
    raise ConvergenceError("Fit coefficients did not stabilize under window shrinking",
                           details={"t_min": t_min, "t_max": t_max, "steps": max_steps})


@dataclass
class LogDetectionReport:
    """
    Does adding log columns explain the samples better than adding powers?

    ratio compares the residual of an equally sized all-power control fit
    with the residual of the log-augmented fit.
    """
    with_log: AsymptoticFit
    without_log: AsymptoticFit
    control: AsymptoticFit
    threshold: float = 10.0

    @property
    def raw_ratio(self) -> float:
        return self.without_log.residual_rms / max(self.with_log.residual_rms, 1e-300)

    @property
    def ratio(self) -> float:
        return self.control.residual_rms / max(self.with_log.residual_rms, 1e-300)

    @property
    def detected(self) -> bool:
        return self.ratio >= self.threshold and self.raw_ratio >= self.threshold

    def to_record(self) -> Dict:
        return {
            "log_coefficients": {_exponent_label(q, True): c
                                 for q, c in self.with_log.log_coefficients.items()},
            "ratio": self.ratio,
            "raw_ratio": self.raw_ratio,
            "detected": self.detected,
            "with_log": self.with_log.to_record(),
            "without_log": self.without_log.to_record(),
            "control": self.control.to_record(),
        }


def log_detection(samples: TraceSamples, basis: ExpansionBasis, log_exponents: Sequence[float],
                  pinned: Optional[Dict[float, float]] = None,
                  window: Optional[Tuple[float, float]] = None,
                  threshold: float = 10.0) -> LogDetectionReport:
    """
    Fit with and without the given log columns, plus a control fit that adds
    the same number of further integer powers instead.

    Args:
        samples: Trace samples
        basis: Plain basis (its log columns are ignored)
        log_exponents: Log columns under test
        pinned: Pinned plain coefficients shared by all three fits
        window: Fit window
        threshold: Improvement ratio that counts as a detection
    """
    plain = basis.with_log(())
    extra = tuple(plain.plain_exponents[-1] + j for j in range(1, len(log_exponents) + 1))
    control = ExpansionBasis(plain.plain_exponents + extra, (), basis.kind, basis.dimension)
    report = LogDetectionReport(
        with_log=fit_expansion(samples, basis.with_log(log_exponents), pinned, window),
        without_log=fit_expansion(samples, plain, pinned, window),
        control=fit_expansion(samples, control, pinned, window),
        threshold=threshold,
    )
    logger.info("Log detection on %s: ratio %.3g (raw %.3g)", samples.label or "samples",
                report.ratio, report.raw_ratio)
    return report
