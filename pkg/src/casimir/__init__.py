"""Casimir Energy Module"""
from .energy import (
    STANDARD_ENERGIES, CasimirRoute, CasimirResult, casimir_finite_part, casimir_perturbative,
    casimir_exact_integral, exact_correction_integral, c1_from_casimir, casimir_from_c1
)
from .functional_relation import (
    RelationCheck, FunctionalRelationReport, SqrtFitReport, functional_relation_probe,
    sqrt_coefficient_fit, small_h_slope
)
