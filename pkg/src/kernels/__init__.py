"""Kernels Module"""
from .trace import (
    TraceKind, TraceSamples, trace, tail_bound, interval_cylinder_trace,
    hemisphere_cylinder_factorized
)
from .fitting import (
    ExpansionBasis, AsymptoticFit, fit_expansion, select_window, LogDetectionReport, log_detection
)
