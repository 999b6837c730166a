"""Special Functions Module"""

from .precision import PrecisionConfig, DEFAULT_PRECISION
from .constants import (
    EULER_GAMMA, LOG2, BasicConstants, basic_constants, bernoulli_numbers, bernoulli_at_half
)
from .zeta import (
    riemann_zeta, hurwitz_zeta_deriv, riemann_zeta_deriv, log_glaisher,
    barnes_zeta2, barnes_zeta2_deriv
)
from .bessel import ZeroKind, bessel_j, bessel_j_derivative, bessel_j_zeros, bessel_j_zeros_below
from .legendre import legendre_p, legendre_p_theta
