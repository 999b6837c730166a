"""
Conformal Cocycle Module
Integrated conformal anomaly between a hemisphere metric and a conformally related one
"""

import math
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Tuple

import numpy as np

from config.settings import COCYCLE_NODES
from src.utils.errors import ValidationError, QuadratureError

logger = logging.getLogger(__name__)

BOUNDARY_THETA = 0.5 * math.pi
CORNER_TOL = 1e-14


class BoundaryLayout(Enum):
    """Boundary conditions on the rim of the reference hemisphere."""
    ALL_D = "allD"
    ALL_N_NOZERO = "allN_nozero"
    ND = "ND"


@dataclass(frozen=True)
class ConformalPair:
    """
    Axisymmetric conformal factor omega(theta) on the unit hemisphere, target metric e^(-2 omega) g.

    omega_theta and box_omega are the polar derivative and the sphere Laplacian
    of omega; corners lists the azimuths where N and D meet on the rim.
    """
    omega: Callable[[np.ndarray], np.ndarray]
    omega_theta: Callable[[np.ndarray], np.ndarray]
    box_omega: Callable[[np.ndarray], np.ndarray]
    scalar_curvature: float = 2.0
    boundary_curvature: float = 0.0
    corners: Tuple[float, ...] = (0.0, math.pi)
    name: str = ""

    def boundary_values(self) -> Tuple[float, float]:
        """omega and its inward normal derivative on the rim."""
        theta = np.array([BOUNDARY_THETA])
        return float(self.omega(theta)[0]), float(-self.omega_theta(theta)[0])

    def corner_values(self) -> Tuple[float, ...]:
        value, _ = self.boundary_values()
        return tuple(value for _ in self.corners)


def stereographic_omega(r: float) -> Tuple[float, float]:
    """
    omega(r) = log 2 - log(1 + r^2) of the equatorial stereographic map onto the unit disc.

    Args:
        r: Disc radius in [0, 1]

    Returns:
        (omega(r), outward normal derivative of omega on the boundary circle)
    """
    if not (0.0 <= r <= 1.0):
        raise ValidationError("r must lie in [0, 1]", details={"r": r})
    return math.log(2.0) - math.log1p(r * r), -1.0


def stereographic_pair() -> ConformalPair:
    """Hemisphere to flat unit disc: omega = log(1 + cos theta), box omega = -1."""
    return ConformalPair(
        omega=lambda theta: np.log1p(np.cos(theta)),
        omega_theta=lambda theta: -np.tan(0.5 * theta),
        box_omega=lambda theta: -np.ones_like(theta),
        name="hemisphere-to-disc",
    )


def zero_pair() -> ConformalPair:
    """omega = 0."""
    return ConformalPair(omega=np.zeros_like, omega_theta=np.zeros_like,
                         box_omega=np.zeros_like, name="identity")


@dataclass
class CocycleBreakdown:
    layout: BoundaryLayout
    value: float
    volume: float
    boundary: float
    normal: float
    corners: float
    zero_mode: float
    notes: list = field(default_factory=list)

    def to_record(self) -> Dict:
        return {"layout": self.layout.value, "value": self.value, "volume": self.volume,
                "boundary": self.boundary, "normal": self.normal, "corners": self.corners,
                "zero_mode": self.zero_mode, "notes": self.notes}


def _nodes(count: int):
    """Gauss-Legendre nodes in x = cos theta over the hemisphere, x in [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(count)
    return 0.5 * (x + 1.0), 0.5 * w


def _single_layout(pair: ConformalPair, layout: BoundaryLayout, nodes: int) -> CocycleBreakdown:
    x, w = _nodes(nodes)
    theta = np.arccos(x)
    omega = pair.omega(theta)
    if not np.all(np.isfinite(omega)):
        raise QuadratureError("omega is not finite on the quadrature nodes",
                              details={"pair": pair.name})
    integrand = omega * (pair.scalar_curvature + pair.box_omega(theta))
    volume = 2.0 * math.pi * float(np.dot(w, integrand)) / (24.0 * math.pi)

    rim_length = 2.0 * math.pi
    omega_b, normal_b = pair.boundary_values()
    boundary = rim_length * omega_b * (pair.boundary_curvature + 0.5 * normal_b) / (12.0 * math.pi)
    sign = 1.0 if layout == BoundaryLayout.ALL_N_NOZERO else -1.0
    normal = sign * rim_length * normal_b / (8.0 * math.pi)

    zero_mode = 0.0
    if layout == BoundaryLayout.ALL_N_NOZERO:
        # area ratio left by the omitted constant mode
        target_area = 2.0 * math.pi * float(np.dot(w, np.exp(-2.0 * omega)))
        zero_mode = 0.5 * math.log(2.0 * math.pi / target_area)
    value = volume + boundary + normal + zero_mode
    return CocycleBreakdown(layout=layout, value=value, volume=volume, boundary=boundary,
                            normal=normal, corners=0.0, zero_mode=zero_mode)


def cocycle_breakdown(pair: ConformalPair, layout: str = "allD",
                      nodes: int = COCYCLE_NODES) -> CocycleBreakdown:
    """
    Cocycle W[e^(-2 omega) g, g] with its parts.

    W = (1/24pi) int omega (R + box omega) dV + (1/12pi) int omega (kappa + n.d omega / 2) dA
        + (1/8pi)(int_N - int_D) n.d omega dA - (1/16) sum omega_k,
    n the inward normal. The ND layout is the mean of allD and allN_nozero
    and requires omega to vanish at the corners.

    Args:
        pair: Conformal factor on the reference hemisphere
        layout: allD, allN_nozero or ND
        nodes: Gauss-Legendre nodes in cos theta

    Returns:
        CocycleBreakdown
    """
    try:
        layout = BoundaryLayout(layout)
    except ValueError:
        raise ValidationError(f"Unknown boundary layout '{layout}'",
                              details={"layouts": [l.value for l in BoundaryLayout]})
    if nodes < 2:
        raise ValidationError("nodes must be at least 2", details={"nodes": nodes})
    if layout != BoundaryLayout.ND:
        return _single_layout(pair, layout, nodes)

    corner_values = pair.corner_values()
    if any(abs(v) > CORNER_TOL for v in corner_values):
        raise ValidationError("ND layout needs omega = 0 at the corners",
                              details={"omega_k": list(corner_values)})
    dirichlet = _single_layout(pair, BoundaryLayout.ALL_D, nodes)
    neumann = _single_layout(pair, BoundaryLayout.ALL_N_NOZERO, nodes)
    corners = -sum(corner_values) / 16.0

    def mean(attr):
        return 0.5 * (getattr(dirichlet, attr) + getattr(neumann, attr))

    return CocycleBreakdown(layout=layout, value=mean("value") + corners, volume=mean("volume"),
                            boundary=mean("boundary"), normal=mean("normal"), corners=corners,
                            zero_mode=mean("zero_mode"),
                            notes=["mean of allD and allN_nozero"])


def cocycle_eval(pair: ConformalPair, layout: str = "allD", nodes: int = COCYCLE_NODES) -> float:
    """Cocycle value; see cocycle_breakdown."""
    result = cocycle_breakdown(pair, layout, nodes)
    logger.debug("Cocycle %s/%s = %.12f", pair.name, result.layout.value, result.value)
    return result.value
