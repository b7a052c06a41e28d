"""Numerical laboratory for generalized Dirichlet integrals on expanding intervals."""
from .dirichlet_core import (
    GridParams,
    coeff,
    coefficients,
    error_representation,
    kernel,
    mn_split,
    partial_sum,
    partial_sum_via_kernel,
)
from .function_model import FunctionSpec, SymmetricDifference, parse_function, phi
from .kernels import BACKEND
from .quadrature import IntegralResult, QuadratureConfig, QuadratureError, integrate, integrate_with_breakpoints

__version__ = "0.1.0"
