"""
Disc Effective Action Module
N/D disc effective action from the hemisphere determinant and the stereographic cocycle
"""

import logging
from dataclasses import dataclass
from typing import Dict

from config.settings import ROUTE_TOLERANCE
from src.specfun import LOG2, riemann_zeta_deriv
from src.utils.errors import RouteDisagreementError
from src.zetafns import hemisphere_zeta_prime0
from .cocycle import cocycle_eval, stereographic_pair

logger = logging.getLogger(__name__)


@dataclass
class DiscEffectiveAction:
    """W = -zeta'(0)/2 of the ND disc by closed form and by hemisphere plus cocycle."""
    closed_form: float
    hemisphere_action: float
    cocycle: float
    printed_form: float

    @property
    def via_cocycle(self) -> float:
        return self.hemisphere_action + self.cocycle

    @property
    def difference(self) -> float:
        return abs(self.closed_form - self.via_cocycle)

    @property
    def value(self) -> float:
        return self.closed_form

    def to_record(self) -> Dict:
        return {
            "closed_form": self.closed_form,
            "hemisphere_plus_cocycle": self.via_cocycle,
            "hemisphere_action": self.hemisphere_action,
            "cocycle": self.cocycle,
            "difference": self.difference,
            "printed_form": self.printed_form,
            "printed_offset": self.printed_form - self.closed_form,
        }


def nd_disc_effective_action(tolerance: float = ROUTE_TOLERANCE) -> DiscEffectiveAction:
    """
    Effective action of the ND disc.

    Closed form (1/2) zeta_R'(-1) + (11/24) log 2 + 1/24. The form with -1/24 is
    kept as printed_form; it sits 1/12 below both routes.

    Raises:
        RouteDisagreementError: If the routes differ by more than tolerance
    """
    zp = riemann_zeta_deriv(-1.0)
    closed = 0.5 * zp + 11.0 * LOG2 / 24.0 + 1.0 / 24.0
    result = DiscEffectiveAction(
        closed_form=closed,
        hemisphere_action=-0.5 * hemisphere_zeta_prime0("ND"),
        cocycle=cocycle_eval(stereographic_pair(), "ND"),
        printed_form=closed - 1.0 / 12.0,
    )
    if result.difference > tolerance:
        raise RouteDisagreementError("Disc effective action routes disagree",
                                     details=result.to_record())
    logger.info("ND disc effective action %.10f (routes differ by %.2g)", closed, result.difference)
    return result
