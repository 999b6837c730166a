"""
Perturbative Zeta Module
First-order-in-h spectral zetas of the NR and DR pi-intervals
"""

import math
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from src.specfun import EULER_GAMMA, LOG2, riemann_zeta, riemann_zeta_deriv
from src.utils.errors import ValidationError, PoleError, UnsupportedConfigurationError

logger = logging.getLogger(__name__)

MAX_PERTURBATIVE_H = 0.1
POLE_POINT = -0.5

_PAIRS = {"NR": "NR", "RN": "NR", "DR": "DR", "RD": "DR"}


@dataclass
class ZetaValue:
    """
    A zeta value at s; at a pole, value is the finite part and residue is set.
    """
    at: float
    value: float
    derivative: Optional[float] = None
    residue: Optional[float] = None
    route: str = ""
    error_estimate: float = 0.0
    notes: List[str] = field(default_factory=list)

    @property
    def is_pole(self) -> bool:
        return self.residue is not None

    def to_record(self) -> Dict:
        record = {"s": self.at, "value": self.value, "route": self.route,
                  "error_estimate": self.error_estimate, "notes": self.notes}
        if self.derivative is not None:
            record["derivative"] = self.derivative
        if self.is_pole:
            record["residue"] = self.residue
            record["finite_part"] = self.value
        return record


def _pair(pair: str) -> str:
    key = str(pair).upper()
    if key not in _PAIRS:
        raise ValidationError(f"Perturbative zetas exist for NR and DR, not '{pair}'",
                              details={"pair": pair})
    return _PAIRS[key]


def _finite_part_at_pole(key: str, h: float):
    """Residue and finite part at s = -1/2, split into h^0 and h^1 parts."""
    residue = -h / (2.0 * math.pi)
    if key == "NR":
        return residue, -1.0 / 12.0, (1.0 - EULER_GAMMA) / math.pi
    return residue, 1.0 / 24.0, (1.0 - EULER_GAMMA - 2.0 * LOG2) / math.pi


def _regular_parts(key: str, s: float):
    """(h^0 value, h^1 coefficient, h^0 derivative, h^1 derivative coefficient)."""
    z0, z2 = riemann_zeta(2.0 * s), riemann_zeta(2.0 * s + 2.0)
    try:
        dz0, dz2 = riemann_zeta_deriv(2.0 * s), riemann_zeta_deriv(2.0 * s + 2.0)
    except UnsupportedConfigurationError:
        dz0 = dz2 = None
    if key == "NR":
        base, slope = z0, 2.0 * s * z2 / math.pi
        if dz0 is None:
            return base, slope, None, None
        return base, slope, 2.0 * dz0, (2.0 * z2 + 4.0 * s * dz2) / math.pi

    log4 = 2.0 * LOG2
    w0, w2 = 4.0 ** s - 1.0, 4.0 ** (s + 1.0) - 1.0
    base, slope = w0 * z0, 2.0 * s * w2 * z2 / math.pi
    if dz0 is None:
        return base, slope, None, None
    d_base = 4.0 ** s * log4 * z0 + 2.0 * w0 * dz0
    d_slope = 2.0 * (w2 * z2 + s * (4.0 ** (s + 1.0) * log4 * z2 + 2.0 * w2 * dz2)) / math.pi
    return base, slope, d_base, d_slope


def perturbative_interval_zeta(pair: str, h: float, s: float) -> ZetaValue:
    """
    Robin interval zeta to first order in h.

    NR: zeta_R(2s) + (2hs/pi) zeta_R(2s+2).
    DR: (2^(2s) - 1) zeta_R(2s) + (2hs/pi)(2^(2s+2) - 1) zeta_R(2s+2).
    At s = -1/2 the residue -h/(2 pi) and the finite part are returned.

    Args:
        pair: NR or DR
        h: Robin strength, |h| < 0.1
        s: Real argument, s != 1/2

    Returns:
        ZetaValue with an O(h^2) error estimate

    Raises:
        PoleError: At s = 1/2
    """
    key = _pair(pair)
    if not abs(h) < MAX_PERTURBATIVE_H:
        raise ValidationError("Perturbative zetas need |h| < 0.1", details={"h": h})
    if not math.isfinite(s):
        raise ValidationError("s must be finite", details={"s": s})
    if abs(s - 0.5) < 1e-12:
        raise PoleError("zeta_R(2s) has a pole at s = 1/2", details={"s": s, "pair": key})

    if abs(s - POLE_POINT) < 1e-12:
        residue, base, slope = _finite_part_at_pole(key, h)
        value = ZetaValue(at=POLE_POINT, value=base + h * slope, residue=residue,
                          route="perturbative", error_estimate=h * h * max(1.0, abs(slope)),
                          notes=["value is the finite part at the pole"])
    else:
        base, slope, d_base, d_slope = _regular_parts(key, s)
        derivative = None if d_base is None else d_base + h * d_slope
        notes = [] if derivative is not None else ["derivative outside the supported range"]
        value = ZetaValue(at=s, value=base + h * slope, derivative=derivative,
                          route="perturbative", error_estimate=h * h * max(1.0, abs(slope)),
                          notes=notes)
    value.notes.append("drops O(h^2) uniformly in s")
    logger.debug("Perturbative %s zeta(%g) at h=%g: %s", key, s, h, value.value)
    return value
