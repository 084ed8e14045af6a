import pytest
from hypothesis import given

from syzforge.ring import (
    ANY_DEGREE, EQ, GF, GRADED_LEX, GT, LEX, LT, MonomialOrder, ParseError, PolyRing, QQ,
    StructuralError, compare_monomials,
)

from strategies import polys

R3 = PolyRing(("x", "y", "z"), QQ)
F5 = PolyRing(("x", "y"), GF(5))


def test_parse_and_print_round_trip(R):
    f = R.parse("x^2 - 3/2*y*z + 4")
    assert str(f) == "x^2 - 3/2*y*z + 4"
    assert R.parse(str(f)) == f


def test_degrees(R, xyz):
    x, y, z = xyz
    assert (x * y + z ** 2).homogeneous_degree() == 2
    assert (x + y * z).homogeneous_degree() is None
    assert R.zero().homogeneous_degree() is ANY_DEGREE
    assert (x ** 3).degree() == 3


def test_grevlex_breaks_ties_from_the_last_variable():
    assert compare_monomials((0, 2, 0), (1, 0, 1)) == GT
    assert compare_monomials((1, 1, 0), (2, 0, 0)) == LT
    assert compare_monomials((1, 1, 1), (1, 1, 1)) == EQ


def test_lex_and_graded_lex():
    lex = MonomialOrder(LEX)
    assert compare_monomials((1, 0, 0), (0, 3, 0), lex) == GT
    assert compare_monomials((1, 0, 0), (0, 3, 0), MonomialOrder(GRADED_LEX)) == LT


def test_compare_rejects_length_mismatch():
    with pytest.raises(StructuralError):
        compare_monomials((1, 0), (1, 0, 0))


def test_mixing_rings_fails(R):
    S = PolyRing(("a", "b"))
    with pytest.raises(StructuralError):
        R.gens()[0] + S.gens()[0]


def test_parse_error_has_column(R):
    with pytest.raises(ParseError) as info:
        R.parse("x+*y")
    assert info.value.column == 3


def test_unknown_order_rejected():
    with pytest.raises(ValueError):
        PolyRing(("x",), QQ, "revlex")


def test_prime_field_frobenius():
    x, y = F5.gens()
    assert (x + y) ** 5 == x ** 5 + y ** 5
    assert str(F5.parse("7*x")) == "2*x"


@given(polys(R3), polys(R3), polys(R3))
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert f * (g + h) == f * g + f * h
    assert (f - f).is_zero()


@given(polys(R3))
def test_print_parse_round_trip_property(f):
    assert R3.parse(str(f)) == f


@given(polys(F5), polys(F5))
def test_prime_field_distributes(f, g):
    assert (f + g) * (f - g) == f * f - g * g
