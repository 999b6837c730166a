"""
Helper Utilities Module
Common utility functions for the spectral toolkit
"""

import math
import json
import hashlib
import dataclasses
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Any

import numpy as np


def relative_error(observed: float, expected: float) -> float:
    """Relative error, falling back to absolute error near zero."""
    scale = abs(expected)
    if scale < 1e-300:
        return abs(observed - expected)
    return abs(observed - expected) / scale


def log_spaced_grid(t_min: float, t_max: float, points: int) -> np.ndarray:
    """Logarithmically spaced sample grid, ascending."""
    if not (0 < t_min < t_max) or points < 2:
        from .errors import ValidationError
        raise ValidationError("Grid needs 0 < t_min < t_max and at least 2 points",
                              details={"t_min": t_min, "t_max": t_max, "points": points})
    return np.geomspace(t_min, t_max, points)


def to_serializable(obj: Any) -> Any:
    """Convert dataclasses, numpy values, enums and fractions to JSON-safe data."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        if hasattr(obj, "to_record"):
            return to_serializable(obj.to_record())
        return {f.name: to_serializable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(_key(k)): to_serializable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_serializable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_serializable(v) for v in obj.tolist()]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _key(k: Any) -> Any:
    if isinstance(k, float) and k.is_integer():
        return int(k)
    if isinstance(k, Enum):
        return k.value
    return k


def to_json(obj: Any, indent: int = 2) -> str:
    """Serialize any result object to JSON text."""
    return json.dumps(to_serializable(obj), indent=indent)


def calculate_params_hash(params: Dict[str, Any]) -> str:
    """Calculate SHA256 hash of a canonical parameter record."""
    canonical = json.dumps(to_serializable(params), sort_keys=True)
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def records_to_csv(records: List[Dict[str, Any]]) -> str:
    """Render flat records as CSV text."""
    import pandas as pd

    if not records:
        return ""
    frame = pd.DataFrame([to_serializable(r) for r in records])
    return frame.to_csv(index=False, float_format="%.17g")


def records_to_table(records: List[Dict[str, Any]]) -> str:
    """Render flat records as an aligned plain-text table."""
    import pandas as pd

    if not records:
        return "(no rows)"
    frame = pd.DataFrame([to_serializable(r) for r in records])
    with pd.option_context("display.float_format", "{:.10g}".format,
                           "display.max_rows", None, "display.width", 200):
        return frame.to_string(index=False)


def format_value(value: float, digits: int = 10) -> str:
    """Format a real number for human output."""
    if value is None:
        return "-"
    if isinstance(value, float) and (math.isinf(value) or math.isnan(value)):
        return str(value)
    return f"{value:.{digits}g}"


def format_status(passed: bool, informational: bool = False) -> str:
    """Format a check status marker."""
    if informational:
        return "INFO"
    return "PASS" if passed else "FAIL"


def truncate_text(text: str, max_length: int = 500, suffix: str = "...") -> str:
    """Truncate text to specified length."""
    if len(text) <= max_length:
        return text
    return text[:max_length - len(suffix)] + suffix
