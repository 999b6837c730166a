"""
Logarithmic Terms Module
Closed forms and series of the log t parts of Robin interval and hemisphere cylinder traces
"""

import math
from typing import Dict

from src.kernels import TraceKind
from src.specfun import bernoulli_at_half
from src.utils.errors import ValidationError
from .bridge import CoefficientTable, UNDETERMINED

LOG_FORMS = ("sine", "gaussian")


def interval_log_coefficient(h: float, k: int) -> float:
    """a'_k of the Robin interval: (-1)^n h^(2n-1) / (pi (2n-1)!) for k = 2n - 1, zero for even k."""
    if int(k) != k or k < 1:
        raise ValidationError("k must be a positive integer", details={"k": k})
    if k % 2 == 0:
        return 0.0
    n = (k + 1) // 2
    return (-1) ** n * h ** k / (math.pi * math.factorial(k))


def _sinh_series(order: int) -> Dict[int, float]:
    """1/(2 sinh(t/2)) = sum_j B_2j(1/2) t^(2j-1) / (2j)!, keyed by power."""
    return {2 * j - 1: float(bernoulli_at_half(2 * j)) / math.factorial(2 * j)
            for j in range(0, order // 2 + 2)}


def interval_log_series(h: float, order: int = 7) -> CoefficientTable:
    """Cylinder log coefficients a'_k, k = 1..order, of the Robin pi-interval (d = 1)."""
    if not (1 <= order <= 21):
        raise ValidationError("order must lie in [1, 21]", details={"order": order})
    table = CoefficientTable(TraceKind.CYLINDER, dimension=1)
    for k in range(1, order + 1):
        table.set(k, UNDETERMINED, interval_log_coefficient(h, k), source="interval log series")
    return table


def hemisphere_log_series(h: float, order: int = 6) -> CoefficientTable:
    """
    Cylinder log coefficients a'_k, k = 0..order, of the Robin hemisphere (d = 2).

    The hemisphere log part is the interval one divided by 2 sinh(t/2); the
    two series are multiplied term by term, leaving only even k.
    """
    if not (0 <= order <= 20):
        raise ValidationError("order must lie in [0, 20]", details={"order": order})
    sinh_terms = _sinh_series(order + 1)
    table = CoefficientTable(TraceKind.CYLINDER, dimension=2)
    for k in range(0, order + 1):
        total = 0.0
        for power, weight in sinh_terms.items():
            interval_power = k - power
            if interval_power >= 1:
                total += interval_log_coefficient(h, interval_power) * weight
        table.set(k, UNDETERMINED, total, source="interval log series / 2 sinh(t/2)")
    return table


def log_closed_forms(h: float, t: float, which: str = "interval", form: str = "sine") -> float:
    """
    Closed-form log t part of the Robin cylinder trace.

    The sine form -sin(h t)/pi * log t is the sum of the a'_k series; the
    gaussian form (e^(-h^2 t^2) - 1)/(pi h t) * log t shares its leading term
    -h t log t / pi. The hemisphere value divides either by 2 sinh(t/2).

    Args:
        h: Robin strength
        t: Positive time
        which: "interval" or "hemisphere"
        form: "sine" or "gaussian"

    Returns:
        The log part at t (0 for h = 0)
    """
    if not (t > 0 and math.isfinite(t)):
        raise ValidationError("t must be positive", details={"t": t})
    if which not in ("interval", "hemisphere"):
        raise ValidationError(f"Unknown log form target '{which}'")
    if form not in LOG_FORMS:
        raise ValidationError(f"Unknown closed form '{form}'", details={"forms": LOG_FORMS})
    if h == 0:
        return 0.0
    if form == "sine":
        value = -math.sin(h * t) / math.pi
    else:
        value = math.expm1(-(h * t) ** 2) / (math.pi * h * t)
    if which == "hemisphere":
        value /= 2.0 * math.sinh(0.5 * t)
    return value * math.log(t)
