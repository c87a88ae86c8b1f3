"""cylpeak: peaks of cylindric plane partitions, numerically.

Exact finite combinatorics, determinantal contour kernels, finite-temperature
Bessel/Airy kernels with Fredholm determinants, a last-passage-percolation
sampler, and scaling/convergence drivers with a CLI.
"""

from . import errors
from .special import (
    Tolerance,
    q_pochhammer_finite,
    q_pochhammer_inf,
    jacobi_theta3,
    theta3_product,
    theta_mult,
    bessel_j,
    airy_ai,
    airy_ai_prime,
    dilog,
    log_gamma,
)

__all__ = [
    "errors",
    "Tolerance",
    "q_pochhammer_finite",
    "q_pochhammer_inf",
    "jacobi_theta3",
    "theta3_product",
    "theta_mult",
    "bessel_j",
    "airy_ai",
    "airy_ai_prime",
    "dilog",
    "log_gamma",
]

__version__ = "0.1.0"
