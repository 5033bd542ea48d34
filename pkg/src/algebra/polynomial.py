"""
Sparse multivariate polynomials over F_q extended by action parameters.

A term key is one exponent vector covering the ring variables followed by the
ring parameters. Keys are normalised on construction: nilpotent exponents at
or above their order drop the term, root-of-unity exponents are reduced and
unit parameters keep Laurent exponents. Degrees, orders and truncations count
variable exponents only, so parameters behave as coefficients.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from src.algebra.field import GENERATOR, FieldSpec, FiniteField, finite_field
from src.algebra.params import NilpotentOrderError, ParamSpec
from src.algebra.parser import ExpressionSyntaxError, UnknownSymbolError, evaluate, parse_expression
from src.services.base_service import ServiceValidationError

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
Scalar = int


class RingMismatchError(ServiceValidationError):
    """Raised when polynomials from incompatible rings are combined."""
    pass


@dataclass(frozen=True)
class PolyRing:
    """F_q[variables] tensored with the parameter ring of ``params``."""

    variables: Tuple[str, ...]
    field: FieldSpec
    params: Tuple[ParamSpec, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "params", tuple(self.params))
        names = self.names
        if len(set(names)) != len(names):
            raise RingMismatchError(f"duplicate names in ring {names}")
        for param in self.params:
            param.check_characteristic(self.field.p)

    @property
    def names(self) -> Tuple[str, ...]:
        return self.variables + tuple(p.name for p in self.params)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @cached_property
    def ops(self) -> FiniteField:
        return finite_field(self.field)

    @cached_property
    def slot(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    @cached_property
    def _param_slots(self) -> Tuple[Tuple[int, ParamSpec], ...]:
        return tuple((self.nvars + i, p) for i, p in enumerate(self.params))

    def param(self, name: str) -> ParamSpec:
        for p in self.params:
            if p.name == name:
                return p
        raise UnknownSymbolError(name)

    def normalize_key(self, key: Exponent) -> Optional[Exponent]:
        """Apply parameter rules; None means the monomial is zero."""
        for i in range(self.nvars):
            if key[i] < 0:
                raise NilpotentOrderError(f"negative power of variable {self.variables[i]}")
        if not self._param_slots:
            return key
        out = list(key)
        for index, spec in self._param_slots:
            reduced = spec.normalize_exponent(out[index])
            if reduced is None:
                return None
            out[index] = reduced
        return tuple(out)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def constant(self, value: Scalar) -> "Polynomial":
        return Polynomial(self, {(0,) * len(self.names): value})

    def integer(self, value: int) -> "Polynomial":
        return self.constant(self.ops.from_int(value))

    def one(self) -> "Polynomial":
        return self.constant(1)

    def symbol(self, name: str) -> "Polynomial":
        if name not in self.slot:
            raise UnknownSymbolError(name)
        key = [0] * len(self.names)
        key[self.slot[name]] = 1
        return Polynomial(self, {tuple(key): 1})

    def variable(self, name: str) -> "Polynomial":
        if name not in self.variables:
            raise UnknownSymbolError(name)
        return self.symbol(name)

    def gens(self) -> List["Polynomial"]:
        return [self.symbol(v) for v in self.variables]

    def parse(self, source: str) -> "Polynomial":
        """Parse an expression; ring names shadow the field generator ``t``."""
        return evaluate(parse_expression(source), _RingAlgebra(self))

    def parse_with(self, source: str, values: Mapping[str, Scalar]) -> "Polynomial":
        """Parse with extra names bound to field elements (family parameters)."""
        if not values:
            return self.parse(source)
        wide = self.with_variables(values)
        return self.lift(wide.parse(source).specialise(values))

    def with_variables(self, variables: Iterable[str]) -> "PolyRing":
        extra = tuple(v for v in variables if v not in self.variables)
        return PolyRing(self.variables + extra, self.field, self.params)

    def join(self, other: "PolyRing") -> "PolyRing":
        """Smallest ring containing both, variables and parameters merged by name."""
        if other.field != self.field:
            raise RingMismatchError(f"fields differ: {self.field} vs {other.field}")
        if other == self:
            return self
        variables = self.variables + tuple(v for v in other.variables if v not in self.variables)
        params = list(self.params)
        known = {p.name: p for p in self.params}
        for p in other.params:
            if p.name in known:
                if known[p.name] != p:
                    raise RingMismatchError(f"parameter {p.name} declared twice with different kinds")
                continue
            params.append(p)
        return PolyRing(variables, self.field, tuple(params))

    def lift(self, f: "Polynomial") -> "Polynomial":
        """The same polynomial read in this ring; names it does not use may be missing here."""
        if f.ring == self:
            return f
        if f.ring.field != self.field:
            raise RingMismatchError(f"fields differ: {f.ring.field} vs {self.field}")
        used = set(f.symbols_used())
        mapping = []
        for name in f.ring.names:
            if name in self.slot:
                mapping.append(self.slot[name])
            elif name in used:
                raise RingMismatchError(f"{name} does not exist in the target ring")
            else:
                mapping.append(None)
        for p in f.ring.params:
            if any(q.name == p.name and q != p for q in self.params):
                raise RingMismatchError(f"parameter {p.name} has a different kind in the target ring")
        width = len(self.names)
        terms: Dict[Exponent, Scalar] = {}
        for key, coeff in f.terms.items():
            new = [0] * width
            for i, e in enumerate(key):
                if e:
                    new[mapping[i]] = e
            terms[tuple(new)] = coeff
        return Polynomial(self, terms, normalized=True)


class _RingAlgebra:
    def __init__(self, ring: PolyRing):
        self.ring = ring

    def constant(self, value: int) -> "Polynomial":
        return self.ring.integer(value)

    def symbol(self, name: str, position: int) -> "Polynomial":
        if name in self.ring.slot:
            return self.ring.symbol(name)
        if name == GENERATOR and self.ring.field.k > 1:
            return self.ring.constant(self.ring.ops.generator)
        raise UnknownSymbolError(name, position)

    def add(self, a: "Polynomial", b: "Polynomial") -> "Polynomial":
        return a + b

    def sub(self, a: "Polynomial", b: "Polynomial") -> "Polynomial":
        return a - b

    def mul(self, a: "Polynomial", b: "Polynomial") -> "Polynomial":
        return a * b

    def neg(self, a: "Polynomial") -> "Polynomial":
        return -a

    def power(self, a: "Polynomial", exponent: int, position: int) -> "Polynomial":
        if exponent < 0 and not a.is_invertible_monomial():
            raise ExpressionSyntaxError("negative exponents are only allowed on unit parameters", position)
        return a ** exponent


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent keys to nonzero field elements."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[Exponent, Scalar], normalized: bool = False):
        self.ring = ring
        self._hash: Optional[int] = None
        if normalized:
            self.terms = {k: c for k, c in terms.items() if c}
            return
        ops = ring.ops
        clean: Dict[Exponent, Scalar] = {}
        for key, coeff in terms.items():
            if not coeff:
                continue
            norm = ring.normalize_key(tuple(key))
            if norm is None:
                continue
            total = ops.add(clean.get(norm, 0), coeff)
            if total:
                clean[norm] = total
            else:
                clean.pop(norm, None)
        self.terms = clean

    # -- basic protocol --------------------------------------------------

    def _coerce(self, other: Union["Polynomial", int]) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError("operands live in different rings; lift them first")
            return other
        if isinstance(other, (int, np.integer)):
            return self.ring.integer(int(other))
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Exponent, Scalar]]:
        return iter(self.terms.items())

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, np.integer)):
            other = self.ring.integer(int(other))
        if not isinstance(other, Polynomial):
            return NotImplemented
        if other.ring != self.ring:
            try:
                joint = self.ring.join(other.ring)
                return joint.lift(self).terms == joint.lift(other).terms
            except (RingMismatchError, UnknownSymbolError):
                return False
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring.names, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: Union["Polynomial", int]) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        add = self.ring.ops.add
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            total = add(terms.get(key, 0), coeff)
            if total:
                terms[key] = total
            else:
                terms.pop(key, None)
        return Polynomial(self.ring, terms, normalized=True)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        neg = self.ring.ops.neg
        return Polynomial(self.ring, {k: neg(c) for k, c in self.terms.items()}, normalized=True)

    def __sub__(self, other: Union["Polynomial", int]) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: int) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other: Union["Polynomial", int]) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.mul(other)

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "Polynomial":
        """Multiply by a field element."""
        if c == 0:
            return self.ring.zero()
        mul = self.ring.ops.mul
        return Polynomial(self.ring, {k: mul(v, c) for k, v in self.terms.items()}, normalized=True)

    def mul(self, other: "Polynomial", truncate: Optional[int] = None) -> "Polynomial":
        """Product, optionally dropping terms of variable degree above ``truncate``."""
        ring = self.ring
        ops = ring.ops
        nv = ring.nvars
        needs_norm = bool(ring.params)
        a_items = list(self.terms.items())
        b_items = list(other.terms.items())
        if len(a_items) < len(b_items):
            a_items, b_items = b_items, a_items
        if truncate is not None:
            a_items = [(k, c, sum(k[:nv])) for k, c in a_items]
            b_items = [(k, c, sum(k[:nv])) for k, c in b_items]
            b_items.sort(key=lambda item: item[2])
        else:
            a_items = [(k, c, 0) for k, c in a_items]
            b_items = [(k, c, 0) for k, c in b_items]
        mul, add = ops._mul, ops._add
        out: Dict[Exponent, Scalar] = {}
        for ka, ca, da in a_items:
            row = mul[ca]
            for kb, cb, db in b_items:
                if truncate is not None and da + db > truncate:
                    break
                key = tuple(x + y for x, y in zip(ka, kb))
                if needs_norm:
                    key = ring.normalize_key(key)
                    if key is None:
                        continue
                total = add[out.get(key, 0)][row[cb]]
                if total:
                    out[key] = total
                else:
                    out.pop(key, None)
        return Polynomial(ring, out, normalized=True)

    def is_invertible_monomial(self) -> bool:
        """A single term in unit and root-of-unity parameters only."""
        if len(self.terms) != 1:
            return False
        (key, _), = self.terms.items()
        if any(key[: self.ring.nvars]):
            return False
        for index, spec in self.ring._param_slots:
            if key[index] and spec.kind not in ("unit", "root_of_unity"):
                return False
        return True

    def is_unit(self) -> bool:
        """
        Invertibility in the parameter ring.

        Nilpotents and p-power roots of unity generate the nilradical, so they
        are sent to their identity values; what remains must be a single
        nonzero monomial in unit and root-of-unity parameters.
        """
        if not self.in_parameter_ring():
            return False
        p = self.ring.field.p
        reduced: Dict[Exponent, Scalar] = {}
        add = self.ring.ops.add
        for key, coeff in self.terms.items():
            new = list(key)
            dropped = False
            for index, spec in self.ring._param_slots:
                if not key[index] or not spec.is_infinitesimal(p):
                    continue
                if spec.kind == "nilpotent":
                    dropped = True
                    break
                new[index] = 0
            if dropped:
                continue
            k = tuple(new)
            total = add(reduced.get(k, 0), coeff)
            if total:
                reduced[k] = total
            else:
                reduced.pop(k, None)
        if len(reduced) != 1:
            return False
        return Polynomial(self.ring, reduced, normalized=True).is_invertible_monomial()

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            if not self.is_invertible_monomial():
                raise NilpotentOrderError("only monomials in unit parameters can be inverted")
            (key, coeff), = self.terms.items()
            inverse = Polynomial(
                self.ring,
                {tuple(-e for e in key): self.ring.ops.inverse(coeff)},
            )
            return inverse ** (-exponent)
        result = self.ring.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result.mul(base)
            exponent >>= 1
            if exponent:
                base = base.mul(base)
        return result

    # -- structure -------------------------------------------------------

    def _var_degree(self, key: Exponent) -> int:
        return sum(key[: self.ring.nvars])

    def degree(self) -> int:
        """Total degree in the variables; -1 for the zero polynomial."""
        return max((self._var_degree(k) for k in self.terms), default=-1)

    def order(self) -> Optional[int]:
        """Lowest variable degree of a term, None for zero."""
        return min((self._var_degree(k) for k in self.terms), default=None)

    def homogeneous_part(self, degree: int) -> "Polynomial":
        return Polynomial(
            self.ring,
            {k: c for k, c in self.terms.items() if self._var_degree(k) == degree},
            normalized=True,
        )

    def homogeneous_parts(self) -> Dict[int, "Polynomial"]:
        parts: Dict[int, Dict[Exponent, Scalar]] = {}
        for k, c in self.terms.items():
            parts.setdefault(self._var_degree(k), {})[k] = c
        return {d: Polynomial(self.ring, t, normalized=True) for d, t in sorted(parts.items())}

    def truncate(self, degree: int) -> "Polynomial":
        return Polynomial(
            self.ring,
            {k: c for k, c in self.terms.items() if self._var_degree(k) <= degree},
            normalized=True,
        )

    def coefficient(self, exponents: Mapping[str, int]) -> Scalar:
        """Field coefficient of the monomial with the given exponents (others zero)."""
        key = [0] * len(self.ring.names)
        for name, e in exponents.items():
            key[self.ring.slot[name]] = e
        return self.terms.get(tuple(key), 0)

    def coefficients_in(self, names: Sequence[str]) -> Dict[Exponent, "Polynomial"]:
        """Split as sum(m * c_m) over monomials m in ``names``; c_m lives in the same ring."""
        slots = []
        for name in names:
            if name not in self.ring.slot:
                raise UnknownSymbolError(name)
            slots.append(self.ring.slot[name])
        grouped: Dict[Exponent, Dict[Exponent, Scalar]] = {}
        for key, coeff in self.terms.items():
            outer = tuple(key[s] for s in slots)
            inner = list(key)
            for s in slots:
                inner[s] = 0
            grouped.setdefault(outer, {})[tuple(inner)] = coeff
        return {m: Polynomial(self.ring, t, normalized=True) for m, t in sorted(grouped.items())}

    def symbols_used(self) -> List[str]:
        used = set()
        for key in self.terms:
            used.update(i for i, e in enumerate(key) if e)
        return [self.ring.names[i] for i in sorted(used)]

    def is_constant(self) -> bool:
        return all(not any(k) for k in self.terms)

    def in_parameter_ring(self) -> bool:
        nv = self.ring.nvars
        return all(not any(k[:nv]) for k in self.terms)

    # -- calculus and substitution --------------------------------------

    def partial_derivative(self, name: str) -> "Polynomial":
        if name not in self.ring.variables:
            raise UnknownSymbolError(name)
        slot = self.ring.slot[name]
        ops = self.ring.ops
        terms: Dict[Exponent, Scalar] = {}
        for key, coeff in self.terms.items():
            e = key[slot]
            if e == 0:
                continue
            c = ops.mul(coeff, ops.from_int(e))
            if not c:
                continue
            new = list(key)
            new[slot] -= 1
            terms[tuple(new)] = c
        return Polynomial(self.ring, terms, normalized=True)

    def gradient(self) -> List["Polynomial"]:
        return [self.partial_derivative(v) for v in self.ring.variables]

    def substitute(
        self,
        mapping: Mapping[str, Union["Polynomial", int]],
        *,
        truncate: Optional[int] = None,
        ring: Optional[PolyRing] = None,
    ) -> "Polynomial":
        """
        Ring homomorphism sending each mapped name to its image and every other
        name to itself. The result lives in ``ring`` or in the join of this ring
        with the rings of the images.
        """
        for name in mapping:
            if name not in self.ring.slot:
                raise UnknownSymbolError(name)
        target = ring or self.ring
        if ring is None:
            for image in mapping.values():
                if isinstance(image, Polynomial):
                    target = target.join(image.ring)
        images: List[Polynomial] = []
        for name in self.ring.names:
            image = mapping.get(name)
            if image is None:
                images.append(target.symbol(name))
            elif isinstance(image, Polynomial):
                images.append(target.lift(image))
            else:
                images.append(target.integer(int(image)))
        cache: Dict[Tuple[int, int], Polynomial] = {}

        def power(slot: int, e: int) -> Polynomial:
            found = cache.get((slot, e))
            if found is None:
                if e == 1:
                    found = images[slot]
                elif e > 1:
                    found = power(slot, e - 1).mul(images[slot], truncate)
                else:
                    found = images[slot] ** e
                cache[(slot, e)] = found
            return found

        add = target.ops._add
        out: Dict[Exponent, Scalar] = {}
        for key, coeff in self.terms.items():
            acc = target.constant(coeff)
            for slot, e in enumerate(key):
                if e:
                    acc = acc.mul(power(slot, e), truncate)
                    if acc.is_zero():
                        break
            for k, c in acc.terms.items():
                total = add[out.get(k, 0)][c]
                if total:
                    out[k] = total
                else:
                    out.pop(k, None)
        return Polynomial(target, out, normalized=True)

    def specialise(self, values: Mapping[str, Scalar]) -> "Polynomial":
        """Substitute field elements for some names (kept in the same ring)."""
        return self.substitute({name: self.ring.constant(v) for name, v in values.items()}, ring=self.ring)

    def identity_specialisation(self) -> "Polynomial":
        """Every parameter at its identity value (0 additively, 1 multiplicatively)."""
        return self.specialise({p.name: p.identity_value() for p in self.ring.params})

    # -- evaluation ------------------------------------------------------

    def evaluate(self, values: Union[Mapping[str, Scalar], Sequence[Scalar]]) -> Scalar:
        """Value at a point; a sequence is read in the order of the ring variables."""
        ops = self.ring.ops
        if not isinstance(values, Mapping):
            values = dict(zip(self.ring.variables, values))
        slots = [(self.ring.slot[name], v) for name, v in values.items()]
        point = [None] * len(self.ring.names)
        for slot, v in slots:
            point[slot] = v
        total = 0
        for key, coeff in self.terms.items():
            acc = coeff
            for slot, e in enumerate(key):
                if not e:
                    continue
                if point[slot] is None:
                    raise RingMismatchError(f"no value given for {self.ring.names[slot]}")
                acc = ops.mul(acc, ops.power(point[slot], e))
            total = ops.add(total, acc)
        return total

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Values at many points given as an (N, nvars) array of element indices."""
        ring = self.ring
        ops = ring.ops
        nv = ring.nvars
        points = np.asarray(points, dtype=np.int64)
        if any(any(k[nv:]) for k in self.terms):
            raise RingMismatchError("specialise parameters before evaluating at points")
        max_exp = max((max(k[:nv], default=0) for k in self.terms), default=0)
        table = ops.power_table(max(max_exp, 1))
        total = np.zeros(points.shape[0], dtype=np.int64)
        for key, coeff in self.terms.items():
            acc = np.full(points.shape[0], coeff, dtype=np.int64)
            for i in range(nv):
                if key[i]:
                    acc = ops.mul_table[acc, table[key[i]][points[:, i]]]
            total = ops.add_table[total, acc]
        return total

    def weighted_homogeneous_check(self, weights: Union[Mapping[str, int], Sequence[int]]) -> Optional[int]:
        """Common weighted degree of all terms, or None (also for zero)."""
        if not isinstance(weights, Mapping):
            weights = dict(zip(self.ring.variables, weights))
        missing = [v for v in self.ring.variables if v not in weights]
        if missing:
            raise RingMismatchError(f"no weight given for {', '.join(missing)}")
        w = [weights[v] for v in self.ring.variables]
        degrees = {sum(a * b for a, b in zip(key, w)) for key in self.terms}
        if len(degrees) != 1:
            return None
        return degrees.pop()

    # -- printing --------------------------------------------------------

    def _format_coefficient(self, c: Scalar) -> str:
        text = self.ring.ops.format_element(c)
        return f"({text})" if "+" in text else text

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.ring.names
        ordered = sorted(self.terms.items(), key=lambda kv: (-self._var_degree(kv[0]), tuple(-e for e in kv[0])))
        parts = []
        for key, coeff in ordered:
            factors = []
            for name, e in zip(names, key):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            if coeff != 1 or not factors:
                factors.insert(0, self._format_coefficient(coeff))
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self!s})"


SubstitutionMap = Dict[str, Polynomial]


def compose(first: Mapping[str, Polynomial], second: Mapping[str, Polynomial]) -> SubstitutionMap:
    """
    Map whose pullback is pulling back by ``first`` and then by ``second``:
    x -> first[x](second).
    """
    names = list(first)
    for name in second:
        if name not in first:
            names.append(name)
    result: SubstitutionMap = {}
    for name in names:
        image = first.get(name)
        if image is None:
            result[name] = second[name]
            continue
        applicable = {k: v for k, v in second.items() if k in image.ring.slot}
        result[name] = image.substitute(applicable)
    return result


__all__ = [
    "RingMismatchError",
    "PolyRing",
    "Polynomial",
    "SubstitutionMap",
    "compose",
    "Exponent",
]
