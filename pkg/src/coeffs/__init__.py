"""Heat-Kernel Coefficients Module"""
from .geometry import (
    Piece, Corner, GeometrySpec, C1Breakdown, c1_wedge, c1_geometry, c1_breakdown,
    c32_corner_structure, lune_geometry, load_geometry, preset_names
)
from .bridge import (
    UNDETERMINED, CoefficientEntry, CoefficientTable, is_determined, bridge_a_to_b, bridge_b_to_a,
    robin_interval_bk
)
from .log_terms import (
    interval_log_coefficient, interval_log_series, hemisphere_log_series, log_closed_forms
)
