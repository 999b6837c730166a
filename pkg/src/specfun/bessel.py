"""
Bessel Functions Module
Bessel J of real order, its derivative, and certified zeros for radial quantization
"""

import math
import logging
from enum import Enum
from typing import List

import numpy as np
from scipy import special
from scipy.optimize import brentq

from config.settings import (
    BESSEL_MAX_ORDER, BESSEL_MAX_X, BESSEL_MAX_ZEROS, BESSEL_RESIDUAL
)
from src.utils.errors import ValidationError, AccuracyError, BracketError
from .precision import PrecisionConfig, resolve_precision

logger = logging.getLogger(__name__)


class ZeroKind(Enum):
    """Which function the zeros belong to."""
    FUNCTION = "function"        # J_m, Dirichlet arc
    DERIVATIVE = "derivative"    # J'_m, Neumann arc


def _check_range(order: float, x: float):
    if not (0 <= order <= BESSEL_MAX_ORDER):
        raise ValidationError(f"Bessel order must lie in [0, {BESSEL_MAX_ORDER:g}]",
                              details={"order": order})
    if not (0 <= x <= BESSEL_MAX_X):
        raise ValidationError(f"Bessel argument must lie in [0, {BESSEL_MAX_X:g}]",
                              details={"x": x})


def bessel_j(order: float, x: float) -> float:
    """
    Bessel function of the first kind J_order(x).

    Args:
        order: Real order in [0, 200]
        x: Real argument in [0, 1e4]

    Returns:
        J_order(x)
    """
    _check_range(order, x)
    value = float(special.jv(order, x))
    if not math.isfinite(value):
        raise AccuracyError("Bessel evaluation lost accuracy",
                            details={"order": order, "x": x})
    return value


def bessel_j_derivative(order: float, x: float) -> float:
    """Derivative J'_order(x)."""
    _check_range(order, x)
    value = float(special.jvp(order, x))
    if not math.isfinite(value):
        raise AccuracyError("Bessel derivative evaluation lost accuracy",
                            details={"order": order, "x": x})
    return value


def _target(kind: ZeroKind):
    return special.jv if kind == ZeroKind.FUNCTION else special.jvp


def _polish(order: int, kind: ZeroKind, guesses: np.ndarray,
            precision: PrecisionConfig) -> np.ndarray:
    """Refine each zero inside a sign-changing bracket and certify it."""
    func = _target(kind)
    # Half the local spacing keeps each bracket around a single zero
    spacing = np.diff(np.concatenate(([0.0], guesses)))
    half_width = np.minimum(0.45 * spacing, 0.5)
    polished = np.empty_like(guesses)
    for i, (z, w) in enumerate(zip(guesses, half_width)):
        lo, hi = max(z - w, 1e-12), z + w
        f_lo, f_hi = func(order, lo), func(order, hi)
        if f_lo == 0.0:
            polished[i] = lo
            continue
        if f_lo * f_hi > 0:
            raise BracketError("Bessel zero bracket does not change sign",
                               details={"order": order, "kind": kind.value,
                                        "index": i + 1, "bracket": [lo, hi]})
        polished[i] = brentq(lambda x: func(order, x), lo, hi, xtol=precision.abs_tol,
                             rtol=4 * np.finfo(float).eps, maxiter=200)

    residual = np.abs(func(order, polished))
    if residual.size and residual.max() >= BESSEL_RESIDUAL:
        raise AccuracyError("Bessel zero failed residual certification",
                            details={"order": order, "kind": kind.value,
                                     "max_residual": float(residual.max())})
    if np.any(np.diff(polished) <= 0):
        raise AccuracyError("Bessel zeros are not strictly increasing",
                            details={"order": order, "kind": kind.value})
    return polished


def bessel_j_zeros(order: int, kind: ZeroKind, count: int,
                   precision: PrecisionConfig = None) -> np.ndarray:
    """
    First `count` positive zeros of J_m or J'_m.

    Initial estimates come from scipy's McMahon-seeded tables; each one is then
    re-bracketed and solved with brentq so the residual can be certified.
    For J'_0 the trivial zero at x = 0 is not included.

    Args:
        order: Integer order m >= 0
        kind: ZeroKind.FUNCTION or ZeroKind.DERIVATIVE
        count: Number of zeros (1 .. 10^4)
        precision: Optional tolerance settings

    Returns:
        Strictly increasing array of zeros
    """
    precision = resolve_precision(precision)
    kind = ZeroKind(kind)
    if int(order) != order or not (0 <= order <= BESSEL_MAX_ORDER):
        raise ValidationError("Bessel zero order must be an integer in range",
                              details={"order": order})
    if not (1 <= count <= BESSEL_MAX_ZEROS):
        raise ValidationError(f"count must lie in [1, {BESSEL_MAX_ZEROS}]",
                              details={"count": count})
    order, count = int(order), int(count)
    if kind == ZeroKind.FUNCTION:
        guesses = special.jn_zeros(order, count)
    else:
        guesses = special.jnp_zeros(order, count)
    return _polish(order, kind, np.asarray(guesses, dtype=float), precision)


def bessel_j_zeros_below(order: int, kind: ZeroKind, x_max: float,
                         precision: PrecisionConfig = None) -> np.ndarray:
    """
    All positive zeros of J_m (or J'_m) not exceeding x_max.

    The count is grown until the last zero passes x_max.
    """
    kind = ZeroKind(kind)
    # j_{m,1} > m and j'_{m,1} >= m
    if order >= x_max:
        return np.empty(0)
    count = max(1, int(math.ceil((x_max - order) / math.pi)) + 2)
    while True:
        count = min(count, BESSEL_MAX_ZEROS)
        zeros = bessel_j_zeros(order, kind, count, precision)
        if zeros[-1] > x_max:
            return zeros[zeros <= x_max]
        if count == BESSEL_MAX_ZEROS:
            raise ValidationError("x_max needs more zeros than supported",
                                  details={"order": order, "x_max": x_max})
        count *= 2
