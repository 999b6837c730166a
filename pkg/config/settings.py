"""
Application Configuration Settings
Hybrid Spectral Toolkit
"""

import os
from pathlib import Path
from typing import Dict, Optional, Any
from dotenv import load_dotenv, dotenv_values

load_dotenv()

# Base Paths
BASE_DIR = Path(__file__).resolve().parent.parent
DATA_DIR = BASE_DIR / "data"
AUDIT_LOG_DIR = Path(os.getenv("SPECTRAL_AUDIT_DIR", str(DATA_DIR / "audit_logs")))
GEOMETRY_DIR = DATA_DIR / "geometries"

# Precision
ABS_TOL = float(os.getenv("SPECTRAL_ABS_TOL", "1e-12"))
REL_TOL = float(os.getenv("SPECTRAL_REL_TOL", "1e-12"))
MAX_TERMS = int(os.getenv("SPECTRAL_MAX_TERMS", "1000000"))

# Special Functions
EULER_MACLAURIN_TERMS = 20
ZETA_SHIFT_MARGIN = 10.0
BESSEL_MAX_ORDER = 200.0
BESSEL_MAX_X = 1.0e4
BESSEL_MAX_ZEROS = 10_000
BESSEL_RESIDUAL = 1e-9

# Spectra
INTERVAL_MAX_COUNT = 100_000
UNION_MAX_COUNT = 10_000
LAMBDA_MAX_LIMIT = 1.0e4
SPECTRUM_MERGE_TOL = float(os.getenv("SPECTRAL_MERGE_TOL", "1e-10"))
ROBIN_RESIDUAL = 1e-10
PERTURBATIVE_MAX_H = 0.5

# Traces & Fitting
DEFAULT_CUTOFF = float(os.getenv("SPECTRAL_CUTOFF", "8000"))
TAIL_TOLERANCE = float(os.getenv("SPECTRAL_TAIL_TOL", "1e-8"))
TAIL_SAFETY_FACTOR = 2.0
CONDITION_LIMIT = float(os.getenv("SPECTRAL_CONDITION_LIMIT", "1e10"))
FIT_T_MIN = float(os.getenv("SPECTRAL_FIT_T_MIN", "0.005"))
FIT_T_MAX = float(os.getenv("SPECTRAL_FIT_T_MAX", "0.1"))
FIT_POINTS = int(os.getenv("SPECTRAL_FIT_POINTS", "60"))
WINDOW_STABILITY = 1e-2

# Quadrature
QUAD_EPSABS = 1e-14
QUAD_EPSREL = 1e-12
QUAD_LIMIT = 200
COCYCLE_NODES = 64

# Zeta / Casimir / Determinant
DERIV_STEP = float(os.getenv("SPECTRAL_DERIV_STEP", "1e-5"))
ROUTE_TOLERANCE = float(os.getenv("SPECTRAL_ROUTE_TOL", "1e-6"))
CASIMIR_COUNT = int(os.getenv("SPECTRAL_CASIMIR_COUNT", "10000"))
CASIMIR_TAIL_TOL = 1e-8

# Runtime
THREADS = int(os.getenv("SPECTRAL_THREADS", str(os.cpu_count() or 1)))
LOG_LEVEL = os.getenv("SPECTRAL_LOG_LEVEL", "WARNING")
AUDIT_ENABLED = os.getenv("SPECTRAL_AUDIT", "1") not in ("0", "false", "no")

# Output Formats
OUTPUT_FORMATS = ["json", "csv", "human"]

# Keys overridable from a config file or command-line flags
OVERRIDABLE = {
    "abs_tol": float,
    "rel_tol": float,
    "max_terms": int,
    "cutoff": float,
    "tail_tol": float,
    "condition_limit": float,
    "t_min": float,
    "t_max": float,
    "points": int,
    "count": int,
    "threads": int,
    "route_tol": float,
}

DEFAULTS: Dict[str, Any] = {
    "abs_tol": ABS_TOL,
    "rel_tol": REL_TOL,
    "max_terms": MAX_TERMS,
    "cutoff": DEFAULT_CUTOFF,
    "tail_tol": TAIL_TOLERANCE,
    "condition_limit": CONDITION_LIMIT,
    "t_min": FIT_T_MIN,
    "t_max": FIT_T_MAX,
    "points": FIT_POINTS,
    "count": CASIMIR_COUNT,
    "threads": THREADS,
    "route_tol": ROUTE_TOLERANCE,
}


def load_config_file(path: str) -> Dict[str, Any]:
    """
    Read a key=value configuration file.

    Args:
        path: Path to the file (dotenv syntax, comments allowed)

    Returns:
        Typed values for the recognised keys
    """
    from src.utils.errors import ValidationError

    file_path = Path(path)
    if not file_path.exists():
        raise ValidationError(f"Config file not found: {path}", details={"path": path})

    raw = dotenv_values(file_path)
    return _coerce(raw, source=str(file_path))


def resolve_settings(config_path: Optional[str] = None,
                     overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Merge defaults, an optional config file and flag overrides; flags win."""
    merged = dict(DEFAULTS)
    if config_path:
        merged.update(load_config_file(config_path))
    if overrides:
        merged.update(_coerce({k: v for k, v in overrides.items() if v is not None},
                              source="flags"))
    return merged


def _coerce(raw: Dict[str, Any], source: str) -> Dict[str, Any]:
    from src.utils.errors import ValidationError

    values = {}
    for key, value in raw.items():
        normalized = key.strip().lower().replace("-", "_")
        if normalized.startswith("spectral_"):
            normalized = normalized[len("spectral_"):]
        if normalized not in OVERRIDABLE:
            raise ValidationError(f"Unknown configuration key '{key}' in {source}",
                                  details={"key": key, "source": source})
        try:
            values[normalized] = OVERRIDABLE[normalized](value)
        except (TypeError, ValueError):
            raise ValidationError(f"Invalid value for '{key}': {value!r}",
                                  details={"key": key, "value": value})
    return values
