"""
Finite fields F_{p^k} with lookup-table arithmetic.

Elements are plain ints: the element sum(a_i t^i) has index sum(a_i p^i), so
0 and 1 are the field zero and one and the prime subfield occupies 0..p-1.
All four operations are precomputed into numpy tables of size q x q, which is
cheap for the fields used here (q <= a few hundred) and lets point sweeps run
as vectorised table lookups.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, List, Optional, Sequence

import numpy as np

from src.algebra.parser import ExpressionSyntaxError, UnknownSymbolError, evaluate, parse_expression
from src.services.base_service import ServiceValidationError

logger = logging.getLogger(__name__)

GENERATOR = "t"


class FieldSpecError(ServiceValidationError):
    """Raised for an invalid characteristic, degree or modulus."""
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def _poly_trim(c: List[int]) -> List[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(a: List[int], b: List[int], p: int) -> List[int]:
    """Remainder of a by b over F_p; coefficient lists are lowest degree first."""
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b):
        factor = (a[-1] * inv_lead) % p
        shift = len(a) - len(b)
        for i, coeff in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * coeff) % p
        _poly_trim(a)
    return a


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Exhaustive check that no monic factor of degree <= deg/2 divides the polynomial."""
    degree = len(coeffs) - 1
    if degree < 1:
        return False
    for factor_degree in range(1, degree // 2 + 1):
        for lower in product(range(p), repeat=factor_degree):
            if not _poly_mod(coeffs, list(lower) + [1], p):
                return False
    return True


class _UnivariateAlgebra:
    """Evaluates expressions in ``t`` to coefficient lists over F_p."""

    def __init__(self, p: int):
        self.p = p

    def _norm(self, c: List[int]) -> List[int]:
        return _poly_trim([x % self.p for x in c])

    def constant(self, value: int) -> List[int]:
        return self._norm([value])

    def symbol(self, name: str, position: int) -> List[int]:
        if name != GENERATOR:
            raise UnknownSymbolError(name, position)
        return [0, 1]

    def add(self, a: List[int], b: List[int]) -> List[int]:
        n = max(len(a), len(b))
        return self._norm([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    def sub(self, a: List[int], b: List[int]) -> List[int]:
        return self.add(a, self.neg(b))

    def neg(self, a: List[int]) -> List[int]:
        return self._norm([-x for x in a])

    def mul(self, a: List[int], b: List[int]) -> List[int]:
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return self._norm(out)

    def power(self, a: List[int], exponent: int, position: int) -> List[int]:
        if exponent < 0:
            raise ExpressionSyntaxError("negative exponent in a modulus", position)
        result = [1]
        for _ in range(exponent):
            result = self.mul(result, a)
        return result


@dataclass(frozen=True)
class FieldSpec:
    """F_{p^k}; for k > 1 the modulus is a monic irreducible polynomial in ``t``."""

    p: int
    k: int = 1
    modulus: Optional[str] = None

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise FieldSpecError(f"characteristic {self.p} is not prime")
        if self.k < 1:
            raise FieldSpecError(f"extension degree must be positive, got {self.k}")
        if self.k == 1 and self.modulus is not None:
            raise FieldSpecError("prime fields take no modulus")
        if self.k > 1:
            if not self.modulus:
                raise FieldSpecError(f"F_{self.p}^{self.k} needs an explicit modulus in {GENERATOR!r}")
            coeffs = self.modulus_coefficients()
            if len(coeffs) - 1 != self.k or coeffs[-1] != 1:
                raise FieldSpecError(f"modulus {self.modulus!r} must be monic of degree {self.k}")
            if not is_irreducible(coeffs, self.p):
                raise FieldSpecError(f"modulus {self.modulus!r} is reducible over F_{self.p}")

    @property
    def order(self) -> int:
        return self.p ** self.k

    def modulus_coefficients(self) -> List[int]:
        if self.modulus is None:
            return [0, 1]
        try:
            return evaluate(parse_expression(self.modulus), _UnivariateAlgebra(self.p))
        except (ExpressionSyntaxError, UnknownSymbolError) as exc:
            raise FieldSpecError(f"cannot read modulus {self.modulus!r}: {exc}") from exc

    def __str__(self) -> str:
        if self.k == 1:
            return f"F{self.p}"
        return f"F{self.order}[{self.modulus}]"


class FiniteField:
    """Arithmetic in F_q on integer element indices."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.p = spec.p
        self.k = spec.k
        self.q = spec.order
        p, k, q = self.p, self.k, self.q

        digits = np.array([[(i // p ** j) % p for j in range(k)] for i in range(q)], dtype=np.int64)
        weights = p ** np.arange(k, dtype=np.int64)
        self.digits = digits

        self.add_table = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        self.neg_table = ((-digits) % p) @ weights

        # schoolbook product of the digit vectors, then reduction by t^k = -(lower terms)
        modulus = spec.modulus_coefficients()
        prod = np.zeros((q, q, 2 * k - 1), dtype=np.int64)
        for a in range(k):
            for b in range(k):
                prod[:, :, a + b] += digits[:, None, a] * digits[None, :, b]
        for top in range(2 * k - 2, k - 1, -1):
            lead = prod[:, :, top] % p
            for i in range(k):
                prod[:, :, top - k + i] -= lead * modulus[i]
            prod[:, :, top] = 0
        self.mul_table = (prod[:, :, :k] % p) @ weights

        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = np.argmax(self.mul_table[1:] == 1, axis=1)
        self.inv_table = inv

        self._add = self.add_table.tolist()
        self._mul = self.mul_table.tolist()
        self._neg = self.neg_table.tolist()
        self._inv = self.inv_table.tolist()
        logger.debug("Built lookup tables for %s", spec)

    zero = 0
    one = 1

    @property
    def generator(self) -> int:
        """Index of t (equal to p), or 1 for a prime field."""
        return self.p if self.k > 1 else 1

    def elements(self) -> Iterator[int]:
        return iter(range(self.q))

    def from_int(self, value: int) -> int:
        return value % self.p

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inverse(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self._mul[a][self.inverse(b)]

    def power(self, a: int, exponent: int) -> int:
        if exponent < 0:
            a, exponent = self.inverse(a), -exponent
        result, base = 1, a
        while exponent:
            if exponent & 1:
                result = self._mul[result][base]
            base = self._mul[base][base]
            exponent >>= 1
        return result

    def roots(self, a: int, n: int) -> List[int]:
        """All b with b^n = a."""
        return [b for b in range(self.q) if self.power(b, n) == a]

    def root(self, a: int, n: int) -> Optional[int]:
        found = self.roots(a, n)
        return found[0] if found else None

    def power_table(self, max_exponent: int) -> np.ndarray:
        """Row e holds x^e for every element x."""
        table = np.ones((max_exponent + 1, self.q), dtype=np.int64)
        elements = np.arange(self.q)
        for e in range(1, max_exponent + 1):
            table[e] = self.mul_table[table[e - 1], elements]
        return table

    def parse_element(self, text: str) -> int:
        """Read an element written as a polynomial expression in ``t``."""
        return evaluate(parse_expression(text), _ElementAlgebra(self))

    def format_element(self, a: int) -> str:
        if self.k == 1:
            return str(a)
        parts = []
        for i, c in enumerate(self.digits[a].tolist()):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
                continue
            monomial = GENERATOR if i == 1 else f"{GENERATOR}^{i}"
            parts.append(monomial if c == 1 else f"{c}*{monomial}")
        return "+".join(parts) if parts else "0"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteField) and other.spec == self.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    def __repr__(self) -> str:
        return f"FiniteField({self.spec})"


class _ElementAlgebra:
    def __init__(self, field: FiniteField):
        self.field = field

    def constant(self, value: int) -> int:
        return self.field.from_int(value)

    def symbol(self, name: str, position: int) -> int:
        if name == GENERATOR and self.field.k > 1:
            return self.field.generator
        raise UnknownSymbolError(name, position)

    def add(self, a: int, b: int) -> int:
        return self.field.add(a, b)

    def sub(self, a: int, b: int) -> int:
        return self.field.sub(a, b)

    def mul(self, a: int, b: int) -> int:
        return self.field.mul(a, b)

    def neg(self, a: int) -> int:
        return self.field.neg(a)

    def power(self, a: int, exponent: int, position: int) -> int:
        if exponent < 0 and a == 0:
            raise ExpressionSyntaxError("negative power of zero", position)
        return self.field.power(a, exponent)


@lru_cache(maxsize=None)
def finite_field(spec: FieldSpec) -> FiniteField:
    """Shared FiniteField instance per spec."""
    return FiniteField(spec)


def prime_field(p: int) -> FiniteField:
    return finite_field(FieldSpec(p))


__all__ = [
    "FieldSpecError",
    "FieldSpec",
    "FiniteField",
    "finite_field",
    "prime_field",
    "is_prime",
    "is_irreducible",
    "GENERATOR",
]
