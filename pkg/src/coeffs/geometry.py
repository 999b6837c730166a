"""
Geometry Coefficients Module
Closed-form C_1 heat-kernel coefficients for manifolds with mixed boundary conditions and corners
"""

import json
import math
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from config.settings import GEOMETRY_DIR
from src.spectra import BCKind
from src.utils.errors import ValidationError, UnsupportedConfigurationError

logger = logging.getLogger(__name__)

CORNER_PAIRS = ("DD", "NN", "RR", "DN", "DR", "NR")

# Robin strength cannot enter the dimensionless corner term, so R behaves as N there
_WEDGE_FORM = {"DD": "DD", "NN": "NN", "RR": "DD", "NR": "DD", "DN": "DN", "DR": "DN"}

# kappa-weighted C_{3/2} corner weights, known only for right angles
_C32_RIGHT_ANGLE = {"DD": -3.0, "ND": 3.0, "NN": 9.0, "DN": -9.0}


def _normalize_pair(pair: str) -> str:
    """Order a corner pair as D < N < R, so ND becomes DN."""
    pair = str(pair).upper()
    if len(pair) != 2 or any(c not in "DNR" for c in pair):
        raise ValidationError(f"Invalid condition pair '{pair}'", details={"pair": pair})
    return "".join(sorted(pair, key="DNR".index))


def c1_wedge(beta: float, pair: str) -> float:
    """
    Corner contribution to C_1 per unit corner measure.

    Args:
        beta: Opening angle in (0, 2 pi]
        pair: DD, NN or DN (ND accepted)

    Returns:
        (pi^2 - beta^2)/(6 beta) for DD/NN, -(pi^2 + 2 beta^2)/(12 beta) for DN
    """
    if not (0 < beta <= 2 * math.pi):
        raise ValidationError("Wedge angle must lie in (0, 2 pi]", details={"beta": beta})
    pair = _normalize_pair(pair)
    if pair in ("DD", "NN"):
        return (math.pi ** 2 - beta ** 2) / (6.0 * beta)
    if pair == "DN":
        return -(math.pi ** 2 + 2.0 * beta ** 2) / (12.0 * beta)
    raise ValidationError(f"No wedge formula for '{pair}'; reduce Robin pairs first",
                          details={"pair": pair})


def c32_corner_structure(pair: str, beta: float = math.pi / 2) -> float:
    """Right-angle corner weight lambda(pi/2) of the kappa term in C_{3/2}."""
    if not math.isclose(beta, math.pi / 2, rel_tol=0, abs_tol=1e-14):
        raise UnsupportedConfigurationError("Corner weights are only known at beta = pi/2",
                                            details={"beta": beta})
    key = str(pair).upper()
    if key not in _C32_RIGHT_ANGLE:
        raise ValidationError(f"Unknown pair '{pair}'", details={"pair": pair})
    return _C32_RIGHT_ANGLE[key]


@dataclass(frozen=True)
class Piece:
    """A smooth boundary piece with one condition."""
    condition: BCKind
    kappa_integral: float = 0.0
    s_integral: Optional[float] = None
    label: str = ""

    def __post_init__(self):
        kind = BCKind(str(self.condition.value if isinstance(self.condition, BCKind)
                          else self.condition).upper())
        object.__setattr__(self, "condition", kind)
        if (kind == BCKind.ROBIN) != (self.s_integral is not None):
            raise ValidationError("s_integral is required on Robin pieces and only there",
                                  details={"condition": kind.value, "s_integral": self.s_integral})

    def to_record(self) -> Dict:
        record = {"condition": self.condition.value, "kappa_integral": self.kappa_integral,
                  "label": self.label}
        if self.s_integral is not None:
            record["s_integral"] = self.s_integral
        return record


@dataclass(frozen=True)
class Corner:
    """Where two pieces meet at angle beta; measure is the corner set's length (1 for a point)."""
    beta: float
    pair: str
    measure: float = 1.0
    label: str = ""

    def __post_init__(self):
        if not (0 < self.beta < 2 * math.pi):
            raise ValidationError("Corner angle must lie in (0, 2 pi)", details={"beta": self.beta})
        pair = _normalize_pair(self.pair)
        if pair not in CORNER_PAIRS:
            raise ValidationError(f"Unknown corner pair '{self.pair}'")
        object.__setattr__(self, "pair", pair)
        if self.measure < 0:
            raise ValidationError("Corner measure must be nonnegative")

    @property
    def wedge_pair(self) -> str:
        return _WEDGE_FORM[self.pair]

    def to_record(self) -> Dict:
        return {"beta": self.beta, "pair": self.pair, "measure": self.measure, "label": self.label}


@dataclass(frozen=True)
class GeometrySpec:
    """Integrated geometric data entering C_1, smearing function fixed to 1."""
    bulk_curvature_integral: float
    xi: float = 0.0
    pieces: Tuple[Piece, ...] = ()
    corners: Tuple[Corner, ...] = ()
    dimension: int = 2
    name: str = ""
    description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        object.__setattr__(self, "corners", tuple(self.corners))
        if self.dimension < 1:
            raise ValidationError("Dimension must be positive")

    @property
    def has_robin(self) -> bool:
        return any(p.condition == BCKind.ROBIN for p in self.pieces) or \
            any("R" in c.pair for c in self.corners)

    def to_record(self) -> Dict:
        return {
            "name": self.name,
            "dimension": self.dimension,
            "bulk_curvature_integral": self.bulk_curvature_integral,
            "xi": self.xi,
            "pieces": [p.to_record() for p in self.pieces],
            "corners": [c.to_record() for c in self.corners],
        }

    @classmethod
    def from_record(cls, record: Dict, name: str = "") -> "GeometrySpec":
        return cls(
            bulk_curvature_integral=_number(record.get("bulk_curvature_integral", 0)),
            xi=_number(record.get("xi", 0)),
            pieces=tuple(Piece(p["condition"], _number(p.get("kappa_integral", 0)),
                               _number(p["s_integral"]) if "s_integral" in p else None,
                               p.get("label", ""))
                         for p in record.get("pieces", [])),
            corners=tuple(Corner(_number(c["beta"]), c["pair"], _number(c.get("measure", 1)),
                                 c.get("label", ""))
                          for c in record.get("corners", [])),
            dimension=int(record.get("dimension", 2)),
            name=record.get("name", name),
            description=record.get("description", ""),
        )


@dataclass
class C1Breakdown:
    """C_1 split into its bulk, boundary, Robin and corner parts."""
    total: float
    bulk: float
    boundary: float
    robin: float
    corners: float
    notes: List[str] = field(default_factory=list)

    def to_record(self) -> Dict:
        return {"c1": self.total, "bulk": self.bulk, "boundary": self.boundary,
                "robin": self.robin, "corners": self.corners, "notes": self.notes}


def c1_breakdown(spec: GeometrySpec) -> C1Breakdown:
    """C_1 with its parts itemized; see c1_geometry."""
    bulk = (1.0 / 6.0 - spec.xi) * spec.bulk_curvature_integral
    boundary = sum(p.kappa_integral for p in spec.pieces) / 3.0
    robin = -2.0 * sum(p.s_integral for p in spec.pieces if p.condition == BCKind.ROBIN)
    corners = sum(c.measure * c1_wedge(c.beta, c.wedge_pair) for c in spec.corners)
    notes = []
    if spec.has_robin:
        notes.append("Robin corners use the Neumann wedge form; valid while S^2 t is small")
    return C1Breakdown(total=bulk + boundary + robin + corners, bulk=bulk, boundary=boundary,
                       robin=robin, corners=corners, notes=notes)


def c1_geometry(spec: GeometrySpec) -> float:
    """
    C_1 = (1/6 - xi) int R + (1/3) int kappa - 2 int S + corner sum.

    Corners with a Robin side take the wedge form of the pair with R read as N.

    Args:
        spec: Geometry

    Returns:
        C_1 in the (4 pi t)^(-d/2) normalization
    """
    return c1_breakdown(spec).total


def lune_geometry(beta: float, pair: str = "DD") -> GeometrySpec:
    """Conformally coupled lune of angle beta bounded by two geodesic semicircles."""
    if not (0 < beta <= math.pi):
        raise ValidationError("Lune angle must lie in (0, pi]", details={"beta": beta})
    pair = _normalize_pair(pair)
    if pair not in ("DD", "DN"):
        raise ValidationError("Lunes are built for DD and ND", details={"pair": pair})
    return GeometrySpec(
        bulk_curvature_integral=4.0 * beta,
        xi=0.125,
        pieces=(Piece(pair[0], 0.0, label="side 1"), Piece(pair[1], 0.0, label="side 2")),
        corners=(Corner(beta, pair, label="north"), Corner(beta, pair, label="south")),
        dimension=2,
        name=f"lune-{pair}",
        description=f"Lune of angle {beta:g}",
    )


def _number(value) -> float:
    """A number, or {"pi": a} for a multiple of pi."""
    if isinstance(value, dict):
        unknown = set(value) - {"pi", "const"}
        if unknown:
            raise ValidationError(f"Unknown keys {sorted(unknown)} in numeric field")
        return float(value.get("const", 0.0)) + math.pi * float(value.get("pi", 0.0))
    return float(value)


@lru_cache(maxsize=1)
def _load_presets() -> Dict[str, Dict]:
    path = GEOMETRY_DIR / "presets.json"
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)["geometries"]
    except (OSError, KeyError, json.JSONDecodeError) as e:
        raise ValidationError(f"Cannot read geometry presets: {e}", details={"path": str(path)})


def preset_names() -> List[str]:
    return sorted(_load_presets())


def load_geometry(name: str) -> GeometrySpec:
    """Named geometry from the shipped presets."""
    presets = _load_presets()
    if name not in presets:
        raise ValidationError(f"Unknown geometry '{name}'",
                              details={"available": sorted(presets)})
    return GeometrySpec.from_record(presets[name], name=name)
