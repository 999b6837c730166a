"""
Zeta Functions Module
Hurwitz, Riemann and Barnes double zeta functions on the real line
"""

import math
import logging
from functools import lru_cache
from typing import Tuple

import numpy as np

from config.settings import EULER_MACLAURIN_TERMS, ZETA_SHIFT_MARGIN
from src.utils.errors import (
    ValidationError, PoleError, ConvergenceError, UnsupportedConfigurationError
)
from .constants import euler_maclaurin_weights, bernoulli_numbers, LOG_2PI
from .precision import PrecisionConfig, resolve_precision

logger = logging.getLogger(__name__)

DERIV_SUPPORTED_RANGE = (-20.0, 20.0)


def _check_arguments(s: float, a: float, precision: PrecisionConfig):
    if not math.isfinite(s):
        raise ValidationError("s must be finite", details={"s": s})
    if not (a > 0 and math.isfinite(a)):
        raise ValidationError("Hurwitz parameter a must be positive", details={"a": a})
    if abs(s - 1.0) < precision.abs_tol:
        raise PoleError("Hurwitz zeta has a pole at s = 1", details={"s": s})


def _euler_maclaurin(s: float, a: float, precision: PrecisionConfig,
                     with_derivative: bool) -> Tuple[float, float]:
    """
    Euler-Maclaurin evaluation of zeta(s, a) and optionally d/ds zeta(s, a).

    The sum is shifted to a + M with a + M > |s| + margin, then closed with
    the integral, the half-endpoint term and EULER_MACLAURIN_TERMS Bernoulli
    corrections.
    """
    shift = max(0, int(math.ceil(abs(s) + ZETA_SHIFT_MARGIN - a)))
    if shift > precision.max_terms:
        raise ConvergenceError("Euler-Maclaurin shift exceeds max_terms",
                               details={"s": s, "a": a, "shift": shift})
    x = a + shift
    log_x = math.log(x)

    nodes = a + np.arange(shift, dtype=float)
    powers = nodes ** (-s)
    value_parts = powers.tolist()
    deriv_parts = (-np.log(nodes) * powers).tolist() if with_derivative else []

    x_pow = x ** (1.0 - s)
    value_parts.append(x_pow / (s - 1.0))
    value_parts.append(0.5 * x ** (-s))
    if with_derivative:
        deriv_parts.append(x_pow * (-log_x / (s - 1.0) - 1.0 / (s - 1.0) ** 2))
        deriv_parts.append(-0.5 * log_x * x ** (-s))

    # Rising factorial (s)_{2j-1} and its s-derivative, built incrementally
    poch, dpoch = s, 1.0
    previous = None
    for j, weight in enumerate(euler_maclaurin_weights(EULER_MACLAURIN_TERMS), start=1):
        if j > 1:
            q = (s + 2 * j - 3) * (s + 2 * j - 2)
            dq = 2.0 * s + 4 * j - 5
            poch, dpoch = poch * q, dpoch * q + poch * dq
        x_term = x ** (-s - 2 * j + 1)
        term = weight * poch * x_term
        if previous is not None and previous != 0.0 and abs(term) > abs(previous):
            raise ConvergenceError("Euler-Maclaurin corrections stopped decreasing",
                                   details={"s": s, "a": a, "index": j})
        value_parts.append(term)
        if with_derivative:
            deriv_parts.append(weight * x_term * (dpoch - log_x * poch))
        if poch == 0.0 and dpoch == 0.0:
            break
        previous = term

    value = math.fsum(value_parts)
    derivative = math.fsum(deriv_parts) if with_derivative else float("nan")
    return value, derivative


def _nonpositive_integer_value(n: int, a: float) -> float:
    """zeta(-n, a) = -B_{n+1}(a)/(n+1), exact up to rounding."""
    m = n + 1
    numbers = bernoulli_numbers(m)
    parts = [math.comb(m, k) * float(numbers[k]) * a ** (m - k) for k in range(m + 1)]
    return -math.fsum(parts) / m


def riemann_zeta(s: float, a: float = 1.0, precision: PrecisionConfig = None) -> float:
    """
    Hurwitz zeta function zeta(s, a); the Riemann zeta function when a = 1.

    Args:
        s: Real argument, s != 1
        a: Hurwitz parameter, a > 0
        precision: Optional tolerance settings

    Returns:
        zeta(s, a)
    """
    precision = resolve_precision(precision)
    s, a = float(s), float(a)
    _check_arguments(s, a, precision)
    if s <= 0 and s.is_integer():
        return _nonpositive_integer_value(int(-s), a)
    value, _ = _euler_maclaurin(s, a, precision, with_derivative=False)
    return value


def hurwitz_zeta_deriv(s: float, a: float = 1.0, precision: PrecisionConfig = None) -> float:
    """Partial derivative of zeta(s, a) with respect to s."""
    precision = resolve_precision(precision)
    s, a = float(s), float(a)
    _check_arguments(s, a, precision)
    _, derivative = _euler_maclaurin(s, a, precision, with_derivative=True)
    return derivative


@lru_cache(maxsize=1)
def _zeta_prime_minus_one() -> float:
    value = hurwitz_zeta_deriv(-1.0, 1.0)
    logger.debug("Cached zeta'(-1) = %.16g", value)
    return value


def log_glaisher() -> float:
    """log A for the Glaisher-Kinkelin constant, from log A = 1/12 - zeta'(-1)."""
    return 1.0 / 12.0 - _zeta_prime_minus_one()


def riemann_zeta_deriv(s: float) -> float:
    """
    Derivative of the Riemann zeta function.

    zeta'(0) = -log(2 pi)/2 is returned exactly and zeta'(-1) is cached;
    other arguments in [-20, 20] go through the Euler-Maclaurin derivative.
    """
    s = float(s)
    if s == 0.0:
        return -0.5 * LOG_2PI
    if s == -1.0:
        return 1.0 / 12.0 - log_glaisher()
    lo, hi = DERIV_SUPPORTED_RANGE
    if not (lo <= s <= hi):
        raise UnsupportedConfigurationError(
            "riemann_zeta_deriv is implemented for s in [-20, 20]", details={"s": s})
    return hurwitz_zeta_deriv(s, 1.0)


def _check_barnes(s: float, a: float):
    if not a > 0:
        raise ValidationError("Barnes parameter a must be positive", details={"a": a})
    if s in (1.0, 2.0):
        raise PoleError("Barnes double zeta has poles at s = 1 and s = 2", details={"s": s})


def barnes_zeta2(s: float, a: float, precision: PrecisionConfig = None) -> float:
    """
    Barnes double zeta function with unit parameters.

    Args:
        s: Real argument, s not in {1, 2}
        a: Shift, a > 0

    Returns:
        zeta_2(s, a | 1, 1) = zeta(s - 1, a) + (1 - a) zeta(s, a)
    """
    s, a = float(s), float(a)
    _check_barnes(s, a)
    value = riemann_zeta(s - 1.0, a, precision)
    if a != 1.0:
        value += (1.0 - a) * riemann_zeta(s, a, precision)
    return value


def barnes_zeta2_deriv(s: float, a: float, precision: PrecisionConfig = None) -> float:
    """s-derivative of barnes_zeta2."""
    s, a = float(s), float(a)
    _check_barnes(s, a)
    value = hurwitz_zeta_deriv(s - 1.0, a, precision)
    if a != 1.0:
        value += (1.0 - a) * hurwitz_zeta_deriv(s, a, precision)
    return value
