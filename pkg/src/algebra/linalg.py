"""
Linear algebra over F_q on element indices, driven by the field lookup tables.

Matrices are numpy int64 arrays of element indices. Elimination is vectorised
row-wise: one pivot at a time, every affected row updated in a single table
lookup.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.algebra.field import FiniteField
from src.algebra.polynomial import Exponent, Polynomial, RingMismatchError
from src.services.base_service import ServiceValidationError

logger = logging.getLogger(__name__)


class InhomogeneousInputError(ServiceValidationError):
    """Raised when ideal membership is asked for polynomials of mixed degrees."""
    pass


def _eliminate(
    field: FiniteField,
    M: np.ndarray,
    pivot_row: int,
    col: int,
    rows: np.ndarray,
) -> None:
    factors = M[rows, col]
    mask = factors != 0
    if not mask.any():
        return
    rows = rows[mask]
    negated = field.neg_table[factors[mask]]
    M[rows] = field.add_table[M[rows], field.mul_table[negated[:, None], M[pivot_row][None, :]]]


def row_reduce(
    matrix: np.ndarray,
    field: FiniteField,
    pivot_columns: Optional[int] = None,
) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row echelon form and pivot columns.

    Pivots are only searched in the first ``pivot_columns`` columns, which
    lets callers reduce an augmented matrix.
    """
    M = np.array(matrix, dtype=np.int64, copy=True)
    if M.ndim != 2:
        raise ServiceValidationError("row_reduce expects a 2-dimensional matrix")
    nrows, ncols = M.shape
    limit = ncols if pivot_columns is None else pivot_columns
    pivots: List[int] = []
    r = 0
    everything = np.arange(nrows)
    for c in range(limit):
        if r == nrows:
            break
        nonzero = np.nonzero(M[r:, c])[0]
        if nonzero.size == 0:
            continue
        found = r + int(nonzero[0])
        if found != r:
            M[[r, found]] = M[[found, r]]
        M[r] = field.mul_table[field.inv_table[M[r, c]], M[r]]
        _eliminate(field, M, r, c, everything[everything != r])
        pivots.append(c)
        r += 1
    return M, pivots


def rank(matrix: np.ndarray, field: FiniteField) -> int:
    """Rank by forward elimination; only rows below the pivot are touched."""
    M = np.array(matrix, dtype=np.int64, copy=True)
    if M.size == 0:
        return 0
    nrows, ncols = M.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nonzero = np.nonzero(M[r:, c])[0]
        if nonzero.size == 0:
            continue
        first = r + int(nonzero[0])
        if first != r:
            M[[r, first]] = M[[first, r]]
        pivot = field.mul_table[field.inv_table[M[r, c]], M[r, c:]]
        hit = r + 1 + np.nonzero(M[r + 1:, c])[0]
        if hit.size:
            negated = field.neg_table[M[hit, c]]
            M[hit, c:] = field.add_table[M[hit, c:], field.mul_table[negated[:, None], pivot[None, :]]]
        r += 1
    return r


def solve(A: np.ndarray, B: np.ndarray, field: FiniteField) -> Optional[np.ndarray]:
    """
    One solution X of A X = B (free unknowns set to zero), or None.

    ``B`` may be a vector or a matrix of right-hand sides solved together.
    """
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    vector = B.ndim == 1
    if vector:
        B = B[:, None]
    if A.shape[0] != B.shape[0]:
        raise ServiceValidationError(f"shape mismatch {A.shape} vs {B.shape}")
    n = A.shape[1]
    reduced, pivots = row_reduce(np.hstack([A, B]), field, pivot_columns=n)
    if np.any(reduced[len(pivots):, n:]):
        return None
    X = np.zeros((n, B.shape[1]), dtype=np.int64)
    for row, col in enumerate(pivots):
        X[col] = reduced[row, n:]
    return X[:, 0] if vector else X


def inverse(A: np.ndarray, field: FiniteField) -> Optional[np.ndarray]:
    """Inverse of a square matrix, or None when singular."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    reduced, pivots = row_reduce(np.hstack([A, np.eye(n, dtype=np.int64)]), field, pivot_columns=n)
    if len(pivots) < n:
        return None
    return reduced[:, n:]


def matmul(A: np.ndarray, B: np.ndarray, field: FiniteField) -> np.ndarray:
    """Matrix product over F_q."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out = field.add_table[out, field.mul_table[A[:, k][:, None], B[k][None, :]]]
    return out


def quadric_ideal_membership(g: Polynomial, generators: Sequence[Polynomial]) -> Optional[List[Polynomial]]:
    """
    Coefficients c_i in the parameter ring with g = sum(c_i * generators[i]).

    All inputs must be homogeneous of one common degree in the variables and
    the generators must have coefficients in F_q. The parameter monomials of g
    are then solved for independently against the same constant matrix.
    """
    if not generators:
        raise InhomogeneousInputError("no generators given")
    ring = g.ring
    for gen in generators:
        if gen.ring != ring:
            raise RingMismatchError("generators and target live in different rings")
        if any(any(k[ring.nvars:]) for k in gen.terms):
            raise RingMismatchError("generators must have constant coefficients")
    degrees = {gen.degree() for gen in generators if not gen.is_zero()}
    for part in (g, *generators):
        if len(part.homogeneous_parts()) > 1:
            raise InhomogeneousInputError(f"{part} is not homogeneous")
    if g.is_zero():
        return [ring.zero() for _ in generators]
    degrees.add(g.degree())
    if len(degrees) != 1:
        raise InhomogeneousInputError(f"degrees differ: {sorted(degrees)}")

    nv = ring.nvars
    columns: Dict[Exponent, int] = {}
    for gen in generators:
        for key in gen.terms:
            columns.setdefault(key[:nv], len(columns))
    rhs_keys: Dict[Exponent, int] = {}
    for key in g.terms:
        if key[:nv] not in columns:
            return None
        rhs_keys.setdefault(key[nv:], len(rhs_keys))

    A = np.zeros((len(columns), len(generators)), dtype=np.int64)
    for i, gen in enumerate(generators):
        for key, coeff in gen.terms.items():
            A[columns[key[:nv]], i] = coeff
    B = np.zeros((len(columns), len(rhs_keys)), dtype=np.int64)
    for key, coeff in g.terms.items():
        B[columns[key[:nv]], rhs_keys[key[nv:]]] = coeff

    X = solve(A, B, ring.ops)
    if X is None:
        return None
    zero_vars = (0,) * nv
    result: List[Polynomial] = []
    for i in range(len(generators)):
        terms = {zero_vars + param_key: int(X[i, j]) for param_key, j in rhs_keys.items()}
        result.append(Polynomial(ring, terms))
    return result


__all__ = [
    "InhomogeneousInputError",
    "row_reduce",
    "rank",
    "solve",
    "inverse",
    "matmul",
    "quadric_ideal_membership",
]
