"""
Unit tests for finite field arithmetic and element notation.
"""

import pytest

from src.algebra.field import FieldSpec, FieldSpecError, finite_field, is_irreducible, prime_field
from src.algebra.parser import UnknownSymbolError

F9 = FieldSpec(3, 2, "t^2+1")
F25 = FieldSpec(5, 2, "t^2+2")


@pytest.mark.parametrize(
    "kwargs,match",
    [
        (dict(p=4), "not prime"),
        (dict(p=3, k=0), "positive"),
        (dict(p=5, k=1, modulus="t"), "no modulus"),
        (dict(p=3, k=2), "explicit modulus"),
        (dict(p=3, k=2, modulus="t^3+t+1"), "degree 2"),
        (dict(p=3, k=2, modulus="t^2-1"), "reducible"),
    ],
)
def test_field_spec_validation(kwargs, match):
    """Invalid characteristics, degrees and moduli raise FieldSpecError."""
    with pytest.raises(FieldSpecError, match=match):
        FieldSpec(**kwargs)


def test_field_spec_order_and_name():
    """F_9 is printed with its modulus."""
    assert F9.order == 9
    assert str(F9) == "F9[t^2+1]"
    assert str(FieldSpec(7)) == "F7"


def test_is_irreducible():
    """t^2 + 2 is irreducible over F_5, t^2 + 1 is not."""
    assert is_irreducible([2, 0, 1], 5)
    assert not is_irreducible([1, 0, 1], 5)


def test_prime_field_arithmetic():
    """Elements of F_p are their residues."""
    f = prime_field(7)
    assert f.add(5, 4) == 2
    assert f.sub(2, 5) == 4
    assert f.mul(3, 5) == 1
    assert f.inverse(3) == 5
    assert f.from_int(-1) == 6
    assert f.power(3, 6) == 1
    assert f.power(3, -1) == 5


def test_extension_field_arithmetic():
    """In F_9 = F_3[t]/(t^2+1) the generator squares to -1."""
    f = finite_field(F9)
    t = f.generator
    assert t == 3
    assert f.mul(t, t) == 2
    assert f.inverse(t) == 6
    assert f.power(t, 8) == 1
    assert f.power(t, 2) == 2
    assert f.power(t, 4) == 1


def test_zero_has_no_inverse():
    """Inverting zero raises ZeroDivisionError."""
    with pytest.raises(ZeroDivisionError):
        prime_field(5).inverse(0)


def test_roots():
    """Square roots of -1 exist in F_9 but not in F_3."""
    assert prime_field(3).root(2, 2) is None
    assert finite_field(F9).roots(2, 2) == [3, 6]
    assert len(finite_field(F9).roots(1, 4)) == 4


def test_parse_and_format_elements():
    """Elements are written as polynomials in t with coefficients in 0..p-1."""
    f = finite_field(F9)
    assert f.parse_element("t+1") == 4
    assert f.parse_element("t^2") == 2
    assert f.parse_element("-t") == 6
    assert f.format_element(4) == "1+t"
    assert f.format_element(6) == "2*t"
    assert f.format_element(0) == "0"
    assert prime_field(7).parse_element("-1") == 6


def test_prime_field_has_no_generator_symbol():
    """t is unknown in a prime field."""
    with pytest.raises(UnknownSymbolError, match="'t'"):
        prime_field(5).parse_element("t")


def test_finite_field_is_cached():
    """One table set per field spec."""
    assert finite_field(F25) is finite_field(FieldSpec(5, 2, "t^2+2"))
    assert finite_field(F25).q == 25
