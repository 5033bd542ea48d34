"""
Property-based tests for field and polynomial arithmetic.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.algebra.field import FieldSpec, finite_field
from src.algebra.polynomial import PolyRing, Polynomial

pytestmark = pytest.mark.property

F9 = finite_field(FieldSpec(3, 2, "t^2+1"))
RING = PolyRing(("x", "y"), FieldSpec(3))

elements = st.integers(min_value=0, max_value=F9.q - 1)
nonzero = st.integers(min_value=1, max_value=F9.q - 1)


@st.composite
def polynomials(draw):
    terms = draw(
        st.dictionaries(
            keys=st.tuples(st.integers(0, 3), st.integers(0, 3)),
            values=st.integers(0, 2),
            max_size=5,
        )
    )
    return Polynomial(RING, terms)


@given(elements, elements, elements)
def test_field_distributes(a, b, c):
    """a(b + c) = ab + ac in F_9."""
    assert F9.mul(a, F9.add(b, c)) == F9.add(F9.mul(a, b), F9.mul(a, c))


@given(nonzero)
def test_field_inverse(a):
    """Every nonzero element has an inverse and a^(q-1) = 1."""
    assert F9.mul(a, F9.inverse(a)) == 1
    assert F9.power(a, F9.q - 1) == 1


@given(elements)
def test_format_parse_round_trip(a):
    """Printed elements read back to themselves."""
    assert F9.parse_element(F9.format_element(a)) == a


@settings(max_examples=50)
@given(polynomials(), polynomials())
def test_frobenius_is_additive(f, g):
    """(f + g)^3 = f^3 + g^3 in characteristic 3."""
    assert (f + g) ** 3 == f ** 3 + g ** 3


@settings(max_examples=50)
@given(polynomials(), polynomials())
def test_leibniz_rule(f, g):
    """d(fg) = f dg + g df."""
    lhs = (f * g).partial_derivative("x")
    rhs = f * g.partial_derivative("x") + g * f.partial_derivative("x")
    assert lhs == rhs


@settings(max_examples=50)
@given(polynomials(), polynomials(), polynomials())
def test_substitution_is_multiplicative(f, g, h):
    """Substituting into a product is the product of substitutions."""
    mapping = {"x": h}
    assert (f * g).substitute(mapping) == f.substitute(mapping) * g.substitute(mapping)


@settings(max_examples=50)
@given(polynomials(), st.integers(0, 2), st.integers(0, 2))
def test_evaluate_matches_substitution(f, a, b):
    """Evaluating equals substituting constants."""
    value = f.evaluate([a, b])
    assert f.specialise({"x": a, "y": b}) == RING.constant(value)
