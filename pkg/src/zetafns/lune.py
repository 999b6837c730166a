"""
Lune Zeta Module
zeta(0) on conformally coupled lunes and the per-corner ND check
"""

import math
from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from src.coeffs import c1_wedge, c1_geometry, lune_geometry
from src.utils.errors import ValidationError


def _check_angle(beta: float, upper: float):
    if not (0 < beta <= upper) or not math.isfinite(beta):
        raise ValidationError(f"Lune angle must lie in (0, {upper / math.pi:g} pi]",
                              details={"beta": beta})


def _dd_zeta_zero(beta: float) -> float:
    return (math.pi / beta - beta / (2.0 * math.pi)) / 12.0


def lune_zeta_zero(beta: float, pair: str = "DD") -> float:
    """
    zeta(0) of the conformal Laplacian on the lune of angle beta.

    DD is (1/12)(pi/beta - beta/(2 pi)). The ND lune of angle beta and the DD
    lune of the same angle make up the DD lune of angle 2 beta, so
    zeta_ND(beta) = zeta_DD(2 beta) - zeta_DD(beta). No zero modes occur.

    Args:
        beta: Opening angle, in (0, 2 pi] for DD and (0, pi] for ND
        pair: DD or ND (DN accepted)

    Returns:
        zeta(0)
    """
    key = str(pair).upper()
    if key == "DD":
        _check_angle(beta, 2.0 * math.pi)
        return _dd_zeta_zero(beta)
    if key in ("ND", "DN"):
        _check_angle(beta, math.pi)
        return _dd_zeta_zero(2.0 * beta) - _dd_zeta_zero(beta)
    raise ValidationError(f"Unknown lune pair '{pair}'", details={"supported": ["DD", "ND"]})


def lune_corner_identity(beta: float) -> Dict[str, float]:
    """
    Per-corner contribution of an ND lune recovered from its zeta(0).

    Removing the volume term beta/6 from 4 pi zeta(0) and halving over the two
    corners must reproduce the DN wedge coefficient.
    """
    _check_angle(beta, math.pi)
    from_zeta = 0.5 * (4.0 * math.pi * lune_zeta_zero(beta, "ND") - beta / 6.0)
    displayed = 0.5 * (-(4.0 * math.pi / 24.0) * (math.pi / beta + beta / math.pi) - beta / 6.0)
    wedge = c1_wedge(beta, "DN")
    return {"beta": beta, "from_zeta": from_zeta, "displayed": displayed, "wedge": wedge,
            "max_error": max(abs(from_zeta - wedge), abs(displayed - wedge))}


@dataclass
class LuneCrossCheck:
    """4 pi zeta(0) against C_1 of the lune geometry."""
    pair: str
    angles: List[float]
    zeta_values: List[float]
    c1_values: List[float]

    @property
    def max_error(self) -> float:
        return max(abs(4.0 * math.pi * z - c) for z, c in zip(self.zeta_values, self.c1_values))

    def to_record(self) -> Dict:
        return {"pair": self.pair, "angles": self.angles, "zeta0": self.zeta_values,
                "c1": self.c1_values, "max_error": self.max_error}


def lune_c1_cross_check(pair: str = "DD", count: int = 10) -> LuneCrossCheck:
    """Compare 4 pi zeta(0) with c1_geometry at count angles spread over (0, pi]."""
    if count < 1:
        raise ValidationError("count must be positive", details={"count": count})
    key = "DN" if str(pair).upper() in ("ND", "DN") else str(pair).upper()
    angles = [float(b) for b in np.linspace(math.pi / count, math.pi, count)]
    return LuneCrossCheck(
        pair=key,
        angles=angles,
        zeta_values=[lune_zeta_zero(b, key) for b in angles],
        c1_values=[c1_geometry(lune_geometry(b, key)) for b in angles],
    )
