"""Exact polynomial arithmetic over Q and real quadratic fields."""
from .linalg import LinearMap, LinearMap3, SingularMatrixError
from .ops import (
    compose_linear,
    derivative,
    hessian,
    hessian_coefficient_matrices,
    hessian_det,
    quadratic_rank_at_origin,
    substitute,
)
from .polynomial import MAX_DEGREE, DegreeCapError, ParseError, Polynomial, format_polynomial, parse
from .scalars import (
    FieldMismatchError,
    QuadraticNumber,
    Scalar,
    format_scalar,
    parse_scalar,
    scalar_from_json,
    scalar_to_json,
    sqrt_rational,
)
from .univariate import RealRoot, real_root_multiplicities, squarefree_decomposition

__all__ = [
    "DegreeCapError",
    "FieldMismatchError",
    "LinearMap",
    "LinearMap3",
    "MAX_DEGREE",
    "ParseError",
    "Polynomial",
    "QuadraticNumber",
    "RealRoot",
    "Scalar",
    "SingularMatrixError",
    "compose_linear",
    "derivative",
    "format_polynomial",
    "format_scalar",
    "hessian",
    "hessian_coefficient_matrices",
    "hessian_det",
    "parse",
    "parse_scalar",
    "quadratic_rank_at_origin",
    "real_root_multiplicities",
    "scalar_from_json",
    "scalar_to_json",
    "sqrt_rational",
    "squarefree_decomposition",
    "substitute",
]
