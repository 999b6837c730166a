"""Conformal Transformations Module"""
from .cocycle import (
    BoundaryLayout, ConformalPair, CocycleBreakdown, stereographic_omega, stereographic_pair,
    zero_pair, cocycle_breakdown, cocycle_eval
)
from .disc import DiscEffectiveAction, nd_disc_effective_action
