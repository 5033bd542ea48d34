"""
Exact algebra over small finite fields: field arithmetic, action parameters,
sparse polynomials, the expression grammar and linear algebra.
"""

from src.algebra.field import FieldSpec, FieldSpecError, FiniteField, finite_field, prime_field
from src.algebra.linalg import InhomogeneousInputError, quadric_ideal_membership, rank, row_reduce, solve
from src.algebra.params import NilpotentOrderError, ParamSpec
from src.algebra.parser import ExpressionSyntaxError, UnknownSymbolError, parse_expression
from src.algebra.polynomial import PolyRing, Polynomial, RingMismatchError, compose

__all__ = [
    "FieldSpec",
    "FieldSpecError",
    "FiniteField",
    "finite_field",
    "prime_field",
    "ParamSpec",
    "NilpotentOrderError",
    "ExpressionSyntaxError",
    "UnknownSymbolError",
    "parse_expression",
    "PolyRing",
    "Polynomial",
    "RingMismatchError",
    "compose",
    "InhomogeneousInputError",
    "quadric_ideal_membership",
    "rank",
    "row_reduce",
    "solve",
]
