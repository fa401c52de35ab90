"""Numerical toolkit for the Hardy-Schrodinger operator ``-Delta - gamma/|x|^2``."""

from ._kernels import BACKEND
from .core import (
    Location,
    ProblemParams,
    alpha_exponents,
    beta_exponents,
    ckn_to_hardy,
    critical_dimension_boundary,
    critical_dimension_interior,
    critical_exponent,
    extremal_interior,
    gamma_hardy_cone,
    hardy_to_ckn,
    mu_gamma_s,
    mu_hardy_sobolev,
    mu_sobolev,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Location",
    "ProblemParams",
    "alpha_exponents",
    "beta_exponents",
    "ckn_to_hardy",
    "critical_dimension_boundary",
    "critical_dimension_interior",
    "critical_exponent",
    "extremal_interior",
    "gamma_hardy_cone",
    "hardy_to_ckn",
    "mu_gamma_s",
    "mu_hardy_sobolev",
    "mu_sobolev",
]
