"""
Hemisphere Zeta Module
zeta'(0) of -Delta on the DD, NN and ND hemispheres by closed form, Barnes zetas and the 1/4 expansion
"""

import math
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from scipy import special

from config.settings import DERIV_STEP, ROUTE_TOLERANCE
from src.specfun import (
    LOG2, riemann_zeta, riemann_zeta_deriv, hurwitz_zeta_deriv, barnes_zeta2
)
from src.utils.errors import ValidationError, PoleError, ConvergenceError, RouteDisagreementError

logger = logging.getLogger(__name__)

SERIES_TOL = 1e-17
SERIES_MAX_TERMS = 200

# -Delta eigenvalues N^2 - 1/4 with degeneracy d(N); the Dirichlet series
# sum d(N) N^-z is  sum w * zeta_R(z - c, a)  over the (w, c, a) triples.
# NN omits its constant mode.
HEMISPHERE_TOWERS: Dict[str, List[Tuple[float, int, float]]] = {
    "ND": [(1.0, 1, 1.0)],
    "DD": [(1.0, 1, 1.5), (-0.5, 0, 1.5)],
    "NN": [(1.0, 1, 1.5), (0.5, 0, 1.5)],
}


def _pair_key(pair: str) -> str:
    key = str(pair).upper()
    key = "ND" if key == "DN" else key
    if key not in HEMISPHERE_TOWERS:
        raise ValidationError(f"Unknown hemisphere pair '{pair}'",
                              details={"supported": sorted(HEMISPHERE_TOWERS)})
    return key


def hemisphere_zeta_prime0_closed(pair: str) -> float:
    """Closed forms in zeta_R'(-1), zeta_R'(0) and log 2."""
    key = _pair_key(pair)
    zp_m1 = riemann_zeta_deriv(-1.0)
    zp_0 = riemann_zeta_deriv(0.0)
    if key == "ND":
        return -zp_m1 - LOG2 / 12.0 - 0.25
    if key == "DD":
        return 2.0 * zp_m1 - zp_0 - 0.25
    return 2.0 * zp_m1 + zp_0 - 0.25


def _richardson_derivative(func, s: float, step: float) -> float:
    def central(h):
        return (func(s + h) - func(s - h)) / (2.0 * h)
    return (4.0 * central(0.5 * step) - central(step)) / 3.0


def nd_barnes_zeta_prime0(step: float = DERIV_STEP) -> float:
    """
    ND value from two Barnes double zetas.

    sum N (N^2 - 1/4)^-s splits into zeta_2(s, 1/2) + zeta_2(s, 3/2); the split
    moves the residue term of the first 1/4 correction, which costs 1/4 at s = 0.
    """
    def split(s):
        return barnes_zeta2(s, 0.5) + barnes_zeta2(s, 1.5)
    return _richardson_derivative(split, 0.0, step) - 0.25


def _tower_value(towers, z: float) -> float:
    return math.fsum(w * riemann_zeta(z - c, a) for w, c, a in towers)


def _series_terms(towers, s: float, start: int):
    """Yield j, (s)_j / (j! 4^j) * Z(2s + 2j) for j >= start."""
    coefficient = 1.0
    for j in range(1, start):
        coefficient *= (s + j - 1) / (4.0 * j)
    for j in range(start, SERIES_MAX_TERMS):
        if j > 0:
            coefficient *= (s + j - 1) / (4.0 * j)
        yield j, coefficient * _tower_value(towers, 2.0 * s + 2.0 * j)


def hemisphere_zeta(pair: str, s: float) -> float:
    """
    Spectral zeta of -Delta on the hemisphere, continued through the 1/4 expansion.

    zeta(s) = sum_j (s)_j / (j! 4^j) Z(2s + 2j), with Z the tower series.
    The Weyl pole sits at s = 1; DD and NN also have boundary poles at
    s = 1/2 - j, which cancel for ND.

    Args:
        pair: ND, DD or NN
        s: Real argument away from the poles

    Returns:
        zeta(s)
    """
    key = _pair_key(pair)
    towers = HEMISPHERE_TOWERS[key]
    if s == 0.0:
        return _tower_value(towers, 0.0) + sum(w for w, c, _ in towers if c == 1) / 8.0
    if abs(s - 1.0) < 1e-12:
        raise PoleError("Weyl pole at s = 1", details={"s": s, "residue": 0.5})
    has_boundary = any(c == 0 for _, c, _ in towers)
    offset = 0.5 - s
    if has_boundary and offset >= -1e-12 and abs(offset - round(offset)) < 1e-12:
        raise PoleError("Boundary pole of the DD/NN hemisphere zeta", details={"s": s})
    nonpositive_integer = s < 0 and abs(s - round(s)) < 1e-12
    if nonpositive_integer:
        raise ValidationError("Negative integer arguments are not supported; use s = 0",
                              details={"s": s})

    terms = []
    for j, term in _series_terms(towers, s, 0):
        terms.append(term)
        if j > 2 and abs(term) < SERIES_TOL * max(1.0, abs(terms[0])):
            return math.fsum(terms)
    raise ConvergenceError("1/4 expansion did not converge", details={"s": s})


def hemisphere_zeta_prime0_series(pair: str) -> float:
    """
    zeta'(0) from the 1/4 expansion: 2 Z'(0) + the j = 1 pole term + sum_j Z(2j)/(j 4^j).
    """
    key = _pair_key(pair)
    towers = HEMISPHERE_TOWERS[key]
    total = [2.0 * w * hurwitz_zeta_deriv(-float(c), a) for w, c, a in towers]
    # j = 1: (s/4) Z(2s + 2); zeta(1 + 2s, a) = 1/(2s) - psi(a) + O(s)
    for w, c, a in towers:
        if c == 1:
            total.append(-w * special.digamma(a) / 4.0)
        else:
            total.append(w * riemann_zeta(2.0, a) / 4.0)
    for j in range(2, SERIES_MAX_TERMS):
        term = _tower_value(towers, 2.0 * j) / (j * 4.0 ** j)
        total.append(term)
        if abs(term) < SERIES_TOL:
            return math.fsum(total)
    raise ConvergenceError("zeta'(0) series did not converge", details={"pair": key})


@dataclass
class HemisphereZetaRoutes:
    """zeta'(0) by independent routes."""
    pair: str
    closed_form: float
    series: float
    barnes: Optional[float] = None

    @property
    def values(self) -> Dict[str, float]:
        routes = {"closed_form": self.closed_form, "series": self.series}
        if self.barnes is not None:
            routes["barnes"] = self.barnes
        return routes

    @property
    def max_disagreement(self) -> float:
        values = list(self.values.values())
        return max(values) - min(values)

    def to_record(self) -> Dict:
        return {"pair": self.pair, "routes": self.values,
                "max_disagreement": self.max_disagreement}


def hemisphere_zeta_routes(pair: str) -> HemisphereZetaRoutes:
    key = _pair_key(pair)
    return HemisphereZetaRoutes(
        pair=key,
        closed_form=hemisphere_zeta_prime0_closed(key),
        series=hemisphere_zeta_prime0_series(key),
        barnes=nd_barnes_zeta_prime0() if key == "ND" else None,
    )


def hemisphere_zeta_prime0(pair: str, tolerance: float = ROUTE_TOLERANCE) -> float:
    """
    zeta'(0) of -Delta on the hemisphere, checked against the independent routes.

    Args:
        pair: ND (DN accepted), DD or NN
        tolerance: Largest allowed disagreement between routes

    Returns:
        The closed-form value

    Raises:
        RouteDisagreementError: If the routes disagree by more than tolerance
    """
    routes = hemisphere_zeta_routes(pair)
    if routes.max_disagreement > tolerance:
        raise RouteDisagreementError("Hemisphere zeta'(0) routes disagree",
                                     details=routes.to_record())
    logger.debug("Hemisphere %s zeta'(0) = %.10f (spread %.2g)", routes.pair,
                 routes.closed_form, routes.max_disagreement)
    return routes.closed_form


def nd_hemisphere_zeta(s: float) -> float:
    """zeta of -Delta on the ND hemisphere."""
    return hemisphere_zeta("ND", s)
