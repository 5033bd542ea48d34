"""
Unit tests for sparse polynomials over finite fields with action parameters.

Tests src/algebra/polynomial.py: parsing, arithmetic, parameter
normalisation, substitution, evaluation and composition of maps.
"""

import numpy as np
import pytest

from src.algebra.field import FieldSpec
from src.algebra.params import NilpotentOrderError, ParamSpec
from src.algebra.parser import ExpressionSyntaxError, UnknownSymbolError
from src.algebra.polynomial import PolyRing, RingMismatchError, compose

F3 = FieldSpec(3)
F5 = FieldSpec(5)
F7 = FieldSpec(7)
F25 = FieldSpec(5, 2, "t^2+2")


@pytest.fixture
def xyz():
    return PolyRing(("x", "y", "z"), F5)


@pytest.fixture
def parameter_ring():
    return PolyRing(
        ("x", "y"),
        F3,
        (ParamSpec("e", "nilpotent", 3), ParamSpec("u", "unit"), ParamSpec("a", "additive")),
    )


def test_parse_and_print(xyz):
    """Terms print by descending degree with explicit products."""
    assert str(xyz.parse("3 + x^2")) == "x^2 + 3"
    assert str(xyz.parse("x*y - y*x")) == "0"
    assert str(xyz.parse("2*x*y^2")) == "2*x*y^2"


def test_arithmetic_reduces_modulo_p(xyz):
    """Coefficients live in F_5."""
    assert xyz.parse("3*x + 2*x").is_zero()
    assert xyz.parse("(x + y)^5") == xyz.parse("x^5 + y^5")
    assert xyz.parse("x - 1") + 1 == xyz.parse("x")


def test_unknown_symbol(xyz):
    """Names outside the ring are rejected."""
    with pytest.raises(UnknownSymbolError, match="'w'"):
        xyz.parse("x + w")


def test_partial_derivative_and_gradient(xyz):
    """d/dx (x^2 + 2xy) = 2x + 2y."""
    f = xyz.parse("x^2 + 2*x*y")
    assert f.partial_derivative("x") == xyz.parse("2*x + 2*y")
    assert f.gradient() == [xyz.parse("2*x + 2*y"), xyz.parse("2*x"), xyz.zero()]
    assert xyz.parse("x^5").partial_derivative("x").is_zero()


def test_degree_order_and_parts(xyz):
    """Degree and order count variable exponents."""
    g = xyz.parse("x^2 + y^3 + z^5")
    assert g.degree() == 5
    assert g.order() == 2
    assert g.homogeneous_part(3) == xyz.parse("y^3")
    assert g.truncate(3) == xyz.parse("x^2 + y^3")
    assert list(g.homogeneous_parts()) == [2, 3, 5]
    assert xyz.zero().degree() == -1
    assert xyz.zero().order() is None


def test_truncated_product(xyz):
    """Terms above the truncation degree are dropped."""
    f = xyz.parse("x + y")
    assert f.mul(f, truncate=1).is_zero()
    assert f.mul(xyz.parse("1 + x"), truncate=1) == f


def test_coefficients(xyz):
    """Coefficients by monomial and by splitting off variables."""
    f = xyz.parse("x^2 + 2*x*y")
    assert f.coefficient({"x": 1, "y": 1}) == 2
    assert f.coefficient({"z": 1}) == 0
    split = f.coefficients_in(["x"])
    assert split == {(1,): xyz.parse("2*y"), (2,): xyz.one()}


def test_substitute_and_evaluate(xyz):
    """Substitution is a ring map; evaluation agrees pointwise and in bulk."""
    f = xyz.parse("x^2 + 2*x*y")
    assert f.substitute({"x": xyz.symbol("y")}) == xyz.parse("3*y^2")
    assert f.evaluate([1, 2, 0]) == 0
    assert f.evaluate({"x": 1, "y": 1, "z": 4}) == 3
    values = f.evaluate_many(np.array([[1, 2, 0], [1, 1, 4]]))
    assert values.tolist() == [0, 3]


def test_rings_must_match():
    """Combining polynomials over different fields is an error."""
    f = PolyRing(("x",), F5).parse("x")
    g = PolyRing(("x",), F7).parse("x")
    with pytest.raises(RingMismatchError):
        f + g
    with pytest.raises(RingMismatchError, match="fields differ"):
        f.ring.join(g.ring)


def test_join_and_lift():
    """Joined rings merge variables by name; lifting keeps the terms."""
    left = PolyRing(("x",), F5)
    right = PolyRing(("y",), F5)
    joint = left.join(right)
    assert joint.variables == ("x", "y")
    assert joint.lift(left.parse("x + 1")) == joint.parse("x + 1")
    with pytest.raises(RingMismatchError, match="does not exist"):
        left.lift(right.parse("y"))


def test_field_generator_and_shadowing():
    """t is the field generator unless the ring has a variable named t."""
    plain = PolyRing(("x", "y"), F25)
    assert plain.parse("t*x").coefficient({"x": 1}) == 5
    weighted = PolyRing(("s", "t", "x", "y"), F25)
    assert not weighted.parse("t").is_constant()


def test_parse_with_binds_family_parameters():
    """Family parameters are replaced by their field values."""
    ring = PolyRing(("x", "y"), F5)
    assert ring.parse_with("a*x + y", {"a": 3}) == ring.parse("3*x + y")


def test_nilpotent_parameters(parameter_ring):
    """e^3 = 0 and negative powers of e are rejected."""
    ring = parameter_ring
    assert ring.parse("e^3").is_zero()
    assert not ring.parse("e^2").is_zero()
    assert ring.parse("(x + e)^3") == ring.parse("x^3")
    with pytest.raises(ExpressionSyntaxError, match="unit parameters"):
        ring.parse("e^-1")


def test_negative_powers_of_variables_are_rejected(parameter_ring):
    """Only unit parameters take negative exponents."""
    with pytest.raises(ExpressionSyntaxError):
        parameter_ring.parse("x^-1")
    assert parameter_ring.parse("u^-2*u^2") == 1


def test_roots_of_unity_reduce_exponents():
    """l^7 = 1 for a seventh root of unity."""
    ring = PolyRing(("x",), F7, (ParamSpec("l", "root_of_unity", 7),))
    assert ring.parse("l^7") == 1
    assert ring.parse("l^-1") == ring.parse("l^6")


def test_is_unit(parameter_ring):
    """Units are nonzero monomials in unit parameters up to nilpotents."""
    ring = parameter_ring
    assert ring.parse("1 + e").is_unit()
    assert ring.parse("2*u").is_unit()
    assert ring.parse("u*(1 + e)").is_unit()
    assert not ring.parse("e").is_unit()
    assert not ring.parse("u + 1").is_unit()
    assert not ring.parse("a").is_unit()
    assert not ring.parse("x").is_unit()


def test_identity_specialisation(parameter_ring):
    """At the identity, additive parameters vanish and units become 1."""
    ring = parameter_ring
    f = ring.parse("u*x + a*y + e*x*y")
    assert f.identity_specialisation() == ring.parse("x")
    assert f.specialise({"a": 2}) == ring.parse("u*x + 2*y + e*x*y")


def test_param_spec_validation():
    """Orders are required exactly for nilpotent and root-of-unity parameters."""
    with pytest.raises(NilpotentOrderError):
        ParamSpec("e", "nilpotent")
    with pytest.raises(NilpotentOrderError):
        ParamSpec("u", "unit", 3)
    with pytest.raises(NilpotentOrderError, match="power of 3"):
        ParamSpec("e", "nilpotent", 4).check_characteristic(3)
    ParamSpec("e", "nilpotent", 9).check_characteristic(3)


def test_weighted_homogeneity():
    """y^2 - x^3 is homogeneous of degree 6 for weights (2, 3)."""
    ring = PolyRing(("x", "y"), F5)
    assert ring.parse("y^2 - x^3").weighted_homogeneous_check({"x": 2, "y": 3}) == 6
    assert ring.parse("y^2 - x^2").weighted_homogeneous_check({"x": 2, "y": 3}) is None


def test_compose_applies_first_then_second():
    """compose(first, second)[x] = first[x](second)."""
    ring = PolyRing(("x", "y"), F5)
    x, y = ring.symbol("x"), ring.symbol("y")
    first = {"x": x + y, "y": y}
    second = {"x": x.scale(2), "y": y}
    result = compose(first, second)
    assert result["x"] == ring.parse("2*x + y")
    assert result["y"] == y
