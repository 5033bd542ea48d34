"""
Exact arithmetic in the odd unimodular lattices I^{1,n}.

I^{1,n} carries the diagonal form (1, -1, ..., -1) in the basis e_0..e_n.
For a degree d del Pezzo surface n = 9 - d; the canonical vector is
k = (-3, 1, ..., 1), roots are the vectors with v.v = -2 and v.k = 0 and
exceptional vectors those with v.v = -1 and v.k = -1.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt
from typing import Iterable, Iterator, Optional, Sequence, Tuple

import numpy as np

from src.services.base_service import ServiceValidationError

logger = logging.getLogger(__name__)

MAX_RANK = 8
# largest e_0-coefficient of a (-1)- or (-2)-class orthogonal/dual to k for n <= 8
MAX_E0_COEFFICIENT = 6


class DimensionError(ServiceValidationError):
    """Raised when vectors of different ranks are combined."""
    pass


class UnsupportedRankError(ServiceValidationError):
    """Raised for lattices I^{1,n} with n outside 1..8."""
    pass


@dataclass(frozen=True, order=True)
class LatticeVector:
    """Integer vector in the e_0..e_n basis."""

    coords: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[int]:
        return iter(self.coords)

    def __getitem__(self, index: int) -> int:
        return self.coords[index]

    def _check(self, other: "LatticeVector") -> None:
        if len(other.coords) != len(self.coords):
            raise DimensionError(
                f"rank mismatch: {len(self.coords)} != {len(other.coords)}"
            )

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(tuple(-a for a in self.coords))

    def __mul__(self, scalar: int) -> "LatticeVector":
        return LatticeVector(tuple(scalar * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class QuadraticSpace:
    """The lattice I^{1,n} with form diag(1, -1, ..., -1)."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DimensionError(f"I^{{1,n}} needs n >= 1, got {self.n}")

    @classmethod
    def for_degree(cls, degree: int) -> "QuadraticSpace":
        """Lattice I^{1,9-d} attached to del Pezzo surfaces of degree d."""
        if not 1 <= degree <= 8:
            raise UnsupportedRankError(f"degree must lie in 1..8, got {degree}")
        return cls(9 - degree)

    @property
    def rank(self) -> int:
        return self.n + 1

    @property
    def degree(self) -> int:
        return 9 - self.n

    @property
    def metric(self) -> np.ndarray:
        return np.diag([1] + [-1] * self.n).astype(np.int64)

    def vector(self, coords: Sequence[int]) -> LatticeVector:
        v = LatticeVector(tuple(coords))
        self.check(v)
        return v

    def check(self, v: LatticeVector) -> None:
        if len(v.coords) != self.rank:
            raise DimensionError(
                f"vector of length {len(v.coords)} does not belong to I^{{1,{self.n}}}"
            )

    def basis(self, i: int) -> LatticeVector:
        """The basis vector e_i."""
        if not 0 <= i <= self.n:
            raise DimensionError(f"basis index {i} outside 0..{self.n}")
        coords = [0] * self.rank
        coords[i] = 1
        return LatticeVector(tuple(coords))

    def canonical(self) -> LatticeVector:
        """k_{9-d} = (-3, 1, ..., 1)."""
        return LatticeVector((-3,) + (1,) * self.n)

    def dot(self, a: LatticeVector, b: LatticeVector) -> int:
        return inner_product(self, a, b)


def inner_product(space: QuadraticSpace, a: LatticeVector, b: LatticeVector) -> int:
    """a_0 b_0 - sum_{i>=1} a_i b_i."""
    space.check(a)
    space.check(b)
    ca, cb = a.coords, b.coords
    return ca[0] * cb[0] - sum(x * y for x, y in zip(ca[1:], cb[1:]))


def _solve_sphere(length: int, square_sum: int, linear_sum: int) -> Iterator[Tuple[int, ...]]:
    """Integer vectors of given length with prescribed sum of squares and sum."""
    if length == 0:
        if square_sum == 0 and linear_sum == 0:
            yield ()
        return
    # x^2 = x (mod 2) forces the two sums to share parity
    if (square_sum - linear_sum) % 2:
        return
    if linear_sum * linear_sum > length * square_sum:
        return
    bound = isqrt(square_sum)
    for x in range(-bound, bound + 1):
        for rest in _solve_sphere(length - 1, square_sum - x * x, linear_sum - x):
            yield (x,) + rest


def _enumerate_level(space: QuadraticSpace, square: int, k_product: int) -> Tuple[LatticeVector, ...]:
    """All v with v.v = square and v.k = k_product, sorted lexicographically."""
    if space.n > MAX_RANK:
        raise UnsupportedRankError(
            f"enumeration is only supported for n <= {MAX_RANK}, got n={space.n}"
        )
    found = []
    for v0 in range(-MAX_E0_COEFFICIENT, MAX_E0_COEFFICIENT + 1):
        # v.k = -3 v0 - sum(v_i), v.v = v0^2 - sum(v_i^2)
        square_sum = v0 * v0 - square
        linear_sum = -3 * v0 - k_product
        if square_sum < 0:
            continue
        for tail in _solve_sphere(space.n, square_sum, linear_sum):
            found.append(LatticeVector((v0,) + tail))
    found.sort()
    return tuple(found)


@lru_cache(maxsize=None)
def _exceptional_cached(n: int) -> Tuple[LatticeVector, ...]:
    return _enumerate_level(QuadraticSpace(n), -1, -1)


@lru_cache(maxsize=None)
def _roots_cached(n: int) -> Tuple[LatticeVector, ...]:
    return _enumerate_level(QuadraticSpace(n), -2, 0)


def enumerate_exceptional(space: QuadraticSpace) -> Tuple[LatticeVector, ...]:
    """Exc_{9-d}: every v with v.v = -1 and v.k = -1, in lexicographic order."""
    result = _exceptional_cached(space.n)
    logger.debug("Exceptional vectors for n=%s: %s", space.n, len(result))
    return result


@dataclass(frozen=True)
class RootSet:
    """Finite set of roots (v.v = -2, v.k = 0) of one space."""

    space: QuadraticSpace
    roots: Tuple[LatticeVector, ...]

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self) -> Iterator[LatticeVector]:
        return iter(self.roots)

    def __contains__(self, v: object) -> bool:
        return v in self._members

    @property
    def _members(self) -> frozenset:
        return frozenset(self.roots)

    def is_negation_closed(self) -> bool:
        members = self._members
        return all(-r in members for r in self.roots)


def enumerate_roots(space: QuadraticSpace) -> RootSet:
    """All (-2)-vectors of E_{9-d} = k^perp."""
    return RootSet(space, _roots_cached(space.n))


def is_root(space: QuadraticSpace, v: LatticeVector) -> bool:
    return inner_product(space, v, v) == -2 and inner_product(space, v, space.canonical()) == 0


def is_exceptional(space: QuadraticSpace, v: LatticeVector) -> bool:
    return inner_product(space, v, v) == -1 and inner_product(space, v, space.canonical()) == -1


def as_matrix(space: QuadraticSpace, vectors: Iterable[LatticeVector]) -> np.ndarray:
    """Stack vectors as rows of an int64 matrix."""
    rows = [v.coords for v in vectors]
    if not rows:
        return np.zeros((0, space.rank), dtype=np.int64)
    matrix = np.asarray(rows, dtype=np.int64)
    if matrix.shape[1] != space.rank:
        raise DimensionError(f"expected vectors of length {space.rank}")
    return matrix


def gram_matrix(
    space: QuadraticSpace,
    rows: Sequence[LatticeVector],
    cols: Optional[Sequence[LatticeVector]] = None,
) -> np.ndarray:
    """Matrix of inner products rows[i].cols[j]."""
    left = as_matrix(space, rows)
    right = left if cols is None else as_matrix(space, cols)
    return left @ space.metric @ right.T


def orthogonal_roots(space: QuadraticSpace, vectors: Sequence[LatticeVector]) -> Tuple[LatticeVector, ...]:
    """Roots of E_{9-d} orthogonal to every given vector."""
    roots = enumerate_roots(space).roots
    if not vectors:
        return roots
    products = gram_matrix(space, roots, vectors)
    mask = ~products.any(axis=1)
    return tuple(r for r, keep in zip(roots, mask) if keep)


__all__ = [
    "DimensionError",
    "UnsupportedRankError",
    "LatticeVector",
    "QuadraticSpace",
    "RootSet",
    "inner_product",
    "enumerate_exceptional",
    "enumerate_roots",
    "is_root",
    "is_exceptional",
    "as_matrix",
    "gram_matrix",
    "orthogonal_roots",
]
