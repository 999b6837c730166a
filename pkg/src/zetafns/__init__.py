"""Spectral Zeta Functions Module"""
from .hemisphere import (
    HEMISPHERE_TOWERS, HemisphereZetaRoutes, hemisphere_zeta, hemisphere_zeta_prime0,
    hemisphere_zeta_prime0_closed, hemisphere_zeta_prime0_series, hemisphere_zeta_routes,
    nd_barnes_zeta_prime0, nd_hemisphere_zeta
)
from .lune import LuneCrossCheck, lune_zeta_zero, lune_corner_identity, lune_c1_cross_check
from .perturbative import ZetaValue, perturbative_interval_zeta
