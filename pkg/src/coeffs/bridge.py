"""
Coefficient Bridge Module
Maps between cylinder-kernel coefficients a_k, a'_k and heat-kernel coefficients b_k, b'_k
"""

import math
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

from scipy import special

from src.kernels import TraceKind
from src.utils.errors import ValidationError, MissingInputError

logger = logging.getLogger(__name__)

SQRT_PI = math.sqrt(math.pi)


class _Undetermined:
    """Marks a coefficient that the available inputs do not fix."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNDETERMINED"

    def __bool__(self) -> bool:
        return False


UNDETERMINED = _Undetermined()

Coefficient = Union[float, _Undetermined]


def is_determined(value) -> bool:
    return value is not None and value is not UNDETERMINED


@dataclass
class CoefficientEntry:
    plain: Coefficient = UNDETERMINED
    log: Optional[Coefficient] = None

    def to_record(self) -> Dict:
        def show(v):
            return "undetermined" if v is UNDETERMINED else v
        record = {"plain": show(self.plain)}
        if self.log is not None:
            record["log"] = show(self.log)
        return record


@dataclass
class CoefficientTable:
    """
    Expansion coefficients indexed by k.

    Heat side: b_k t^(k/2) + b'_k t^(k/2) log t. Cylinder side: a_k t^k + a'_k t^k log t.
    A log entry of None means the term cannot occur (k below 2 - d).
    """
    side: TraceKind
    dimension: int
    entries: Dict[int, CoefficientEntry] = field(default_factory=dict)
    provenance: Dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        self.side = TraceKind(self.side)
        for k, entry in self.entries.items():
            if entry.log is not None and k < 2 - self.dimension:
                raise ValidationError(f"Log entry at k={k} below 2 - d", details={"k": k})

    @property
    def indices(self) -> List[int]:
        return sorted(self.entries)

    def plain(self, k: int) -> Coefficient:
        entry = self.entries.get(k)
        return entry.plain if entry else UNDETERMINED

    def log(self, k: int) -> Coefficient:
        entry = self.entries.get(k)
        if k < 2 - self.dimension:
            return None
        return entry.log if entry and entry.log is not None else UNDETERMINED

    def set(self, k: int, plain: Coefficient = UNDETERMINED, log: Optional[Coefficient] = None,
            source: str = ""):
        if log is not None and k < 2 - self.dimension:
            raise ValidationError(f"Log entry at k={k} below 2 - d", details={"k": k})
        self.entries[k] = CoefficientEntry(plain, log)
        if source:
            self.provenance[k] = source

    def undetermined(self) -> List[str]:
        """Names of the undetermined entries, e.g. 'a_3' or "b'_2"."""
        letter = "b" if self.side == TraceKind.HEAT else "a"
        missing = []
        for k in self.indices:
            entry = self.entries[k]
            if entry.plain is UNDETERMINED:
                missing.append(f"{letter}_{k}")
            if entry.log is UNDETERMINED:
                missing.append(f"{letter}'_{k}")
        return missing

    def to_record(self) -> Dict:
        return {
            "side": self.side.value,
            "dimension": self.dimension,
            "entries": {str(k): self.entries[k].to_record() for k in self.indices},
            "provenance": {str(k): v for k, v in sorted(self.provenance.items())},
        }


def _plain_factor(k: int) -> float:
    """b_k / a_k for k <= 0 or even k."""
    return 2.0 ** k * SQRT_PI / special.gamma((1 - k) / 2.0)


def _odd_factor(k: int) -> float:
    """b_k / a'_k for odd positive k."""
    return (-1) ** ((k + 1) // 2) * 2.0 ** (k - 1) * special.gamma((k + 1) / 2.0) * SQRT_PI


def _log_factor(k: int) -> float:
    """b'_k / a'_k for k <= 0 or even k."""
    return 2.0 ** (k - 1) * SQRT_PI / special.gamma((1 - k) / 2.0)


def _scaled(value: Coefficient, factor: float) -> Coefficient:
    return value * factor if is_determined(value) else UNDETERMINED


def _check_range(table: CoefficientTable, side: TraceKind, d: int):
    if table.side != side:
        raise ValidationError(f"Expected a {side.value} table, got {table.side.value}")
    if d != table.dimension:
        raise ValidationError("Dimension does not match the table",
                              details={"d": d, "table": table.dimension})
    if table.entries and min(table.entries) < -d:
        raise ValidationError("Table starts below k = -d", details={"k_min": min(table.entries)})


def bridge_a_to_b(table: CoefficientTable, d: int, strict: bool = False) -> CoefficientTable:
    """
    Heat coefficients from cylinder coefficients.

    b_k = 2^k sqrt(pi)/Gamma((1-k)/2) a_k for k <= 0 and even k; for odd
    positive k, b_k comes from the log coefficient a'_k. b'_k follows a'_k
    for k <= 0 and even k, and vanishes for odd positive k.

    Args:
        table: Cylinder table indexed from -d
        d: Dimension
        strict: Raise instead of marking undetermined entries

    Returns:
        Heat CoefficientTable

    Raises:
        MissingInputError: In strict mode, listing the undetermined indices
    """
    _check_range(table, TraceKind.CYLINDER, d)
    k_max = max(table.entries) if table.entries else -d
    heat = CoefficientTable(TraceKind.HEAT, d)
    for k in range(-d, k_max + 1):
        odd_positive = k > 0 and k % 2 == 1
        if odd_positive:
            plain = _scaled(table.log(k), _odd_factor(k))
            source = f"b_{k} from a'_{k}"
        else:
            plain = _scaled(table.plain(k), _plain_factor(k))
            source = f"b_{k} from a_{k}"
        log = None
        if k >= 2 - d:
            log = 0.0 if odd_positive else _scaled(table.log(k), _log_factor(k))
        heat.set(k, plain, log, source)

    missing = heat.undetermined()
    if missing:
        if strict:
            raise MissingInputError("Cylinder inputs leave heat coefficients undetermined",
                                    details={"undetermined": missing})
        logger.debug("Undetermined heat coefficients: %s", missing)
    return heat


def bridge_b_to_a(table: CoefficientTable, d: int, strict: bool = False) -> CoefficientTable:
    """
    Cylinder coefficients from heat coefficients; a_k for odd positive k stays undetermined.

    Raises:
        MissingInputError: In strict mode, listing the undetermined indices
    """
    _check_range(table, TraceKind.HEAT, d)
    k_max = max(table.entries) if table.entries else -d
    cylinder = CoefficientTable(TraceKind.CYLINDER, d)
    for k in range(-d, k_max + 1):
        odd_positive = k > 0 and k % 2 == 1
        if odd_positive:
            plain = UNDETERMINED
            log = _scaled(table.plain(k), 1.0 / _odd_factor(k))
            source = f"a'_{k} from b_{k}"
        else:
            plain = _scaled(table.plain(k), 1.0 / _plain_factor(k))
            log = _scaled(table.log(k), 1.0 / _log_factor(k)) if k >= 2 - d else None
            source = f"a_{k} from b_{k}"
        cylinder.set(k, plain, log, source)

    missing = cylinder.undetermined()
    if missing and strict:
        raise MissingInputError("Heat inputs leave cylinder coefficients undetermined",
                                details={"undetermined": missing})
    return cylinder


def robin_interval_bk(h: float, k_index: int) -> float:
    """Heat coefficient b_k = h^k / (2 Gamma(k/2 + 1)) of the Robin pi-interval, k >= 1."""
    if int(k_index) != k_index or not (1 <= k_index <= 20):
        raise ValidationError("k_index must be an integer in [1, 20]", details={"k_index": k_index})
    return h ** k_index / (2.0 * math.gamma(k_index / 2.0 + 1.0))
