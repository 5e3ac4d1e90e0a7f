"""Spectral and scattering computations on a generalized cusp end."""

from .cusp_spectral import (
    ContourSpec,
    CuspGeometry,
    mode_eigenvalues,
    pole_set_H,
    resolvent_apply,
    resolvent_kernel,
    resolvent_kernel_continued,
)
from .errors import AccuracyError, CuspError, DomainError, PoleError
from .numbers import LogPoint, ScaledComplex
from .quadrature import QuadratureSpec
from .scattering import (
    SpectralShift,
    eta_factor,
    functional_equation_residual,
    generalized_eigenfunction,
    model_scattering_matrix,
    omega_factor,
    phi_n,
    xi_factor,
)
from .special_functions import ZeroSet, cylinder_g, find_hankel_zeros, hankel, q_bound, q_remainder
from .weber import GridFunction, weber_forward, weber_inverse, weber_multiplier

__all__ = [
    "AccuracyError", "ContourSpec", "CuspError", "CuspGeometry", "DomainError", "GridFunction",
    "LogPoint", "PoleError", "QuadratureSpec", "ScaledComplex", "SpectralShift", "ZeroSet",
    "cylinder_g", "eta_factor", "find_hankel_zeros", "functional_equation_residual",
    "generalized_eigenfunction", "hankel", "mode_eigenvalues", "model_scattering_matrix",
    "omega_factor", "phi_n", "pole_set_H", "q_bound", "q_remainder", "resolvent_apply",
    "resolvent_kernel", "resolvent_kernel_continued", "weber_forward", "weber_inverse",
    "weber_multiplier", "xi_factor",
]
