"""
Mode Integrals Module
Normalization, Barnes' integral, pole limits and first-order Robin perturbation of hemisphere modes
"""

import math
import logging
from dataclasses import dataclass
from typing import Callable, Tuple

from scipy import special
from scipy.integrate import quad

from config.settings import QUAD_EPSABS, QUAD_EPSREL, QUAD_LIMIT
from src.specfun import legendre_p_theta
from src.utils.errors import ValidationError, QuadratureError
from src.utils.helpers import relative_error

logger = logging.getLogger(__name__)

MODE_CHECK_TOL = 1e-8
POLE_ANGLE = 1e-6


@dataclass
class IntegralCheck:
    """One quadrature against its closed form."""
    name: str
    numeric: float
    expected: float
    quad_error: float

    @property
    def rel_error(self) -> float:
        return relative_error(self.numeric, self.expected)


@dataclass
class ModeIntegralReport:
    """Checks for the mode P^{-k}_{n+k}(cos theta)."""
    k: float
    n: int
    norm: IntegralCheck
    barnes: IntegralCheck
    pole_limit: IntegralCheck
    tolerance: float = MODE_CHECK_TOL

    @property
    def passed(self) -> bool:
        return all(c.rel_error < self.tolerance for c in (self.norm, self.barnes))\
            and self.pole_limit.rel_error < 1e-6


def _integrate(func: Callable[[float], float], a: float, b: float,
               label: str) -> Tuple[float, float]:
    value, error = quad(func, a, b, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT)
    if not math.isfinite(value) or error > max(1e-10 * abs(value), 1e-13):
        raise QuadratureError(f"Quadrature for {label} did not converge",
                              details={"value": value, "error_estimate": error})
    return value, error


def _check_mode(k: float, n: int):
    if not (0 < k <= 10):
        raise ValidationError("Mode order k must lie in (0, 10]", details={"k": k})
    if int(n) != n or not (0 <= n <= 10):
        raise ValidationError("Mode degree n must be an integer in [0, 10]", details={"n": n})


def norm_integral(k: float, n: int) -> Tuple[float, float]:
    """Integral of (P^{-k}_{n+k})^2 over x in (-1, 1), as an integral in theta."""
    def integrand(theta):
        return legendre_p_theta(-k, n + k, theta) ** 2 * math.sin(theta)
    return _integrate(integrand, 0.0, math.pi, "normalization")


def boundary_integral(k: float, n: int, upper: float = math.pi) -> Tuple[float, float]:
    """Integral over (0, upper) of (P^{-k}_{n+k}(cos theta))^2 / sin(theta)."""
    # x = cos(theta) turns (1 - x^2)^(k/2) into sin^k, taming 1/sin at both poles
    def integrand(theta):
        return legendre_p_theta(-k, n + k, theta) ** 2 / math.sin(theta)
    return _integrate(integrand, 0.0, upper, "boundary weight")


def mode_integral_checks(k: float, n: int) -> ModeIntegralReport:
    """
    Verify the mode integrals of P^{-k}_{n+k} by adaptive quadrature.

    Args:
        k: Order parameter, 0 < k <= 10
        n: Degree offset, 0 <= n <= 10

    Returns:
        ModeIntegralReport with normalization, Barnes and pole-limit checks
    """
    _check_mode(k, n)
    norm_value, norm_err = norm_integral(k, n)
    norm_expected = 2.0 * math.gamma(n + 1) / ((2 * k + 2 * n + 1) * special.gamma(2 * k + n + 1))

    half_value, half_err = boundary_integral(k, n, upper=0.5 * math.pi)
    mu, nu = -k, n + k
    barnes_expected = -(1.0 / (2.0 * mu)) * special.gamma(1 + mu + nu) / special.gamma(1 - mu + nu)

    ratio = legendre_p_theta(-k, n + k, POLE_ANGLE) / math.sin(POLE_ANGLE) ** k
    pole_expected = 1.0 / (2.0 ** k * special.gamma(k + 1))

    report = ModeIntegralReport(
        k=k, n=n,
        norm=IntegralCheck("normalization", norm_value, float(norm_expected), norm_err),
        barnes=IntegralCheck("barnes", half_value, float(barnes_expected), half_err),
        pole_limit=IntegralCheck("pole_limit", ratio, float(pole_expected), 0.0),
    )
    logger.debug("Mode checks k=%g n=%d: %s", k, n, report.passed)
    return report


def normalization_squared(m_bar: int, n: int) -> float:
    """
    Closed-form normalization of sin(k phi) P^{-k}_{n+k}(cos theta), k = m_bar/2.

    N^2 = (m_bar + 2n + 1) Gamma(m_bar + n + 1) / (pi Gamma(n + 1)), fixed by
    requiring unit norm on the hemisphere.
    """
    return (m_bar + 2 * n + 1) * math.exp(math.lgamma(m_bar + n + 1) - math.lgamma(n + 1)) / math.pi


def perturbation_delta(m: int, n: int, h: float) -> float:
    """
    First-order shift of sqrt(lambda_{mn}) on the (D,R) hemisphere.

    delta lambda = -h N^2 * integral of (P^{-k}_{n+k}(cos theta))^2 / sin(theta),
    with k = m_bar/2, m_bar = 2m + 1 and N^2 from normalization_squared;
    returns delta lambda / (2 sqrt(lambda)).
    """
    if int(m) != m or not (0 <= m <= 10):
        raise ValidationError("m must be an integer in [0, 10]", details={"m": m})
    if int(n) != n or not (0 <= n <= 10):
        raise ValidationError("n must be an integer in [0, 10]", details={"n": n})
    if not abs(h) < 0.1:
        raise ValidationError("Perturbation needs |h| < 0.1", details={"h": h})
    m_bar = 2 * m + 1
    k = 0.5 * m_bar
    weight, _ = boundary_integral(k, n)
    delta_lambda = -h * normalization_squared(m_bar, n) * weight
    sqrt_lambda = 0.5 + k + n
    return delta_lambda / (2.0 * sqrt_lambda)
