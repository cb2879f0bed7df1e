"""Exact arithmetic and certified experiments for the distribution of
``alpha zeta^n`` modulo one."""

from .errors import (
    BranchingUnavailable,
    InvalidPath,
    PreconditionError,
    ReducibleError,
    UndecidableError,
    WindowTooSmall,
)
from .exact import AlgebraicReal, DyadicInterval, FieldElement, nearest_integer, parse_real, parse_rational
from .intpoly import IntPolynomial, parse_poly

__version__ = "0.1.0"

__all__ = [
    "AlgebraicReal", "DyadicInterval", "FieldElement", "IntPolynomial", "nearest_integer",
    "parse_poly", "parse_real", "parse_rational", "PreconditionError", "UndecidableError",
    "ReducibleError", "WindowTooSmall", "BranchingUnavailable", "InvalidPath",
]
