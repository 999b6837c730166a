"""
Precision Module
Tolerance settings shared by the special-function kernel
"""

from dataclasses import dataclass

from config.settings import ABS_TOL, REL_TOL, MAX_TERMS
from src.utils.errors import ValidationError


@dataclass(frozen=True)
class PrecisionConfig:
    """Absolute/relative tolerances and the series term cap."""
    abs_tol: float = ABS_TOL
    rel_tol: float = REL_TOL
    max_terms: int = MAX_TERMS

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValidationError("abs_tol must be positive", details={"abs_tol": self.abs_tol})
        if not self.rel_tol > 0:
            raise ValidationError("rel_tol must be positive", details={"rel_tol": self.rel_tol})
        if self.max_terms < 10:
            raise ValidationError("max_terms must be at least 10",
                                  details={"max_terms": self.max_terms})

    @classmethod
    def from_settings(cls, settings: dict = None) -> "PrecisionConfig":
        """Build from a resolved settings mapping (see config.resolve_settings)."""
        settings = settings or {}
        return cls(
            abs_tol=float(settings.get("abs_tol", ABS_TOL)),
            rel_tol=float(settings.get("rel_tol", REL_TOL)),
            max_terms=int(settings.get("max_terms", MAX_TERMS)),
        )


DEFAULT_PRECISION = PrecisionConfig()


def resolve_precision(precision: PrecisionConfig = None) -> PrecisionConfig:
    return precision if precision is not None else DEFAULT_PRECISION
