"""
Legendre Functions Module
Associated Legendre (Ferrers) functions of real degree and order on (-1, 1)
"""

import math

from scipy import special

from src.utils.errors import ValidationError, ConvergenceError
from .precision import PrecisionConfig, resolve_precision


def _terminating_degree(mu: float, nu: float, tol: float):
    """n = nu + mu when it is a nonnegative integer, else None."""
    n = nu + mu
    rounded = round(n)
    if rounded >= 0 and abs(n - rounded) <= tol * max(1.0, abs(n)):
        return int(rounded)
    return None


def _ferrers(k: float, nu: float, sin_half_sq: float, sin_theta: float,
             tan_half: float, precision: PrecisionConfig) -> float:
    """
    P^{-k}_nu in terms of half-angle data.

    When nu - k is a nonnegative integer n, Euler's transformation turns the
    hypergeometric factor into a polynomial of degree n:
        P^{-k}_{n+k} = (sin(theta)/2)^k / Gamma(1+k) * F(-n, n+2k+1; 1+k; sin^2(theta/2))
    Otherwise the defining series
        tan(theta/2)^k / Gamma(1+k) * F(-nu, nu+1; 1+k; sin^2(theta/2))
    is used directly.
    """
    n = _terminating_degree(-k, nu, precision.rel_tol)
    if n is not None:
        prefactor = (0.5 * sin_theta) ** k / special.gamma(1.0 + k)
        series = special.hyp2f1(-n, n + 2.0 * k + 1.0, 1.0 + k, sin_half_sq)
    else:
        prefactor = tan_half ** k / special.gamma(1.0 + k)
        series = special.hyp2f1(-nu, nu + 1.0, 1.0 + k, sin_half_sq)
    value = float(prefactor * series)
    if not math.isfinite(value):
        raise ConvergenceError("Hypergeometric series for the Legendre function did not converge",
                               details={"k": k, "nu": nu, "sin_half_sq": sin_half_sq})
    return value


def _check_order(mu: float):
    if mu > 0:
        raise ValidationError("Only non-positive orders mu = -k are supported",
                              details={"mu": mu})


def legendre_p(mu: float, nu: float, x: float, precision: PrecisionConfig = None) -> float:
    """
    Associated Legendre function of the first kind P^mu_nu(x) on the cut.

    Args:
        mu: Order, mu = -k <= 0
        nu: Real degree (nu = n + k for the hemisphere modes)
        x: Argument in (-1, 1)
        precision: Optional tolerance settings

    Returns:
        P^mu_nu(x)
    """
    precision = resolve_precision(precision)
    _check_order(mu)
    if not (-1.0 < x < 1.0):
        raise ValidationError("Legendre argument must lie in (-1, 1)", details={"x": x})
    one_minus, one_plus = 1.0 - x, 1.0 + x
    sin_theta = math.sqrt(one_minus * one_plus)
    tan_half = math.sqrt(one_minus / one_plus)
    return _ferrers(-mu, nu, 0.5 * one_minus, sin_theta, tan_half, precision)


def legendre_p_theta(mu: float, nu: float, theta: float,
                     precision: PrecisionConfig = None) -> float:
    """
    P^mu_nu(cos theta) evaluated from the polar angle.

    Keeps full relative accuracy near both poles, where cos theta rounds to +-1.
    """
    precision = resolve_precision(precision)
    _check_order(mu)
    if not (0.0 < theta < math.pi):
        raise ValidationError("Polar angle must lie in (0, pi)", details={"theta": theta})
    half = 0.5 * theta
    return _ferrers(-mu, nu, math.sin(half) ** 2, math.sin(theta), math.tan(half), precision)
