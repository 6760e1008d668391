from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nuchi.errors import (
    ArityMismatch,
    ExponentOverflow,
    NegativeExponent,
    PolynomialSyntaxError,
    RingMismatch,
    UnknownVariable,
    ZeroPolynomial,
)
from nuchi.poly import (
    DEGREVLEX,
    GF,
    LEX,
    LOCAL_DEGREVLEX,
    Ring,
    parse_point,
    parse_polynomial,
)

from .strategies import RING_X, RING_XY, RING_XYZ, nonzero_polynomials, polynomials, rational_points


# ------------------------------------------------------------------ parsing

def test_parse_basic_terms():
    f = RING_XY.parse("x^2 + 2*x*y")
    assert dict(f.terms()) == {(2, 0): 1, (1, 1): 2}


def test_parse_zero():
    assert RING_XY.parse("0").is_zero()
    assert RING_XY.parse("x - x").is_zero()


def test_parse_unknown_variable():
    with pytest.raises(UnknownVariable) as err:
        RING_XY.parse("x + z")
    assert err.value.name == "z"


def test_parse_negative_exponent():
    with pytest.raises(NegativeExponent):
        RING_XY.parse("x^-1")


def test_parse_syntax_error_offset():
    with pytest.raises(PolynomialSyntaxError) as err:
        RING_XY.parse("x + + y")
    assert err.value.offset == 4


def test_parse_requires_explicit_multiplication():
    with pytest.raises(PolynomialSyntaxError):
        RING_XY.parse("2x")


def test_parse_rationals_and_unary_minus():
    f = RING_XY.parse("-1/2*x + 3/4")
    assert f.coefficient((1, 0)) == Fraction(-1, 2)
    assert f.constant_term() == Fraction(3, 4)
    assert RING_XY.parse("-x^2") == -(RING_XY.parse("x") ** 2)


def test_parse_parentheses():
    assert RING_XY.parse("(x+y)*(x-y)") == RING_XY.parse("x^2 - y^2")


def test_exponent_overflow():
    with pytest.raises(ExponentOverflow):
        RING_X.parse("x^2147483648")


@given(polynomials(RING_XY))
def test_print_parse_roundtrip(f):
    assert parse_polynomial(str(f), RING_XY) == f


@given(polynomials(RING_XYZ, max_terms=6))
def test_print_parse_roundtrip_three_vars(f):
    assert parse_polynomial(str(f), RING_XYZ) == f


def test_prime_field_roundtrip_and_reduction():
    ring = Ring(("x", "y"), GF(7))
    f = ring.parse("3/2*x + 10")
    assert f == ring.parse("5*x + 3")
    assert parse_polynomial(str(f), ring) == f


# --------------------------------------------------------------- arithmetic

def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        RING_XY.parse("x") + RING_X.parse("x")


def test_difference_of_squares():
    assert RING_XY.parse("(x+y)*(x-y)") == RING_XY.parse("x^2") - RING_XY.parse("y^2")


def test_binomial_square():
    assert RING_XY.parse("x+y") ** 2 == RING_XY.parse("x^2 + 2*x*y + y^2")


@given(polynomials(RING_XY))
def test_additive_identity(f):
    assert f + RING_XY.zero() == f


@given(polynomials(RING_XY, max_terms=4), polynomials(RING_XY, max_terms=4))
def test_multiplication_commutes(f, g):
    assert f * g == g * f


@settings(max_examples=120)
@given(
    polynomials(RING_XY, max_terms=3),
    polynomials(RING_XY, max_terms=3),
    polynomials(RING_XY, max_terms=3),
)
def test_distributivity(f, g, h):
    assert (f + g) * h == f * h + g * h


def test_pow_validation():
    with pytest.raises(Exception):
        RING_XY.parse("x") ** -1


# ----------------------------------------------------------------- calculus

def test_partial_derivative_examples():
    assert RING_XY.parse("x^3 + y^3").derivative(0) == RING_XY.parse("3*x^2")
    assert RING_XY.parse("x^2").derivative(1).is_zero()
    assert RING_XY.parse("x*y").derivative(0) == RING_XY.parse("y")


def test_derivative_index_out_of_range():
    with pytest.raises(IndexError):
        RING_XY.parse("x").derivative(2)


@given(polynomials(RING_XYZ, max_terms=4))
def test_schwarz_symmetry(f):
    for i in range(3):
        for j in range(i + 1, 3):
            assert f.derivative(i).derivative(j) == f.derivative(j).derivative(i)


# --------------------------------------------------------------- evaluation

def test_evaluate_examples():
    assert RING_XY.parse("x^2 + y").evaluate([2, 1]) == 5
    f = RING_XY.parse("x^2 - 3*x*y + 1/2")
    assert f.evaluate([0, 0]) == f.constant_term()
    c = Fraction(7, 3)
    assert RING_XY.parse("x - y").evaluate([c, c]) == 0


def test_evaluate_arity_mismatch():
    with pytest.raises(ArityMismatch):
        RING_XY.parse("x").evaluate([1])


@given(
    polynomials(RING_XY, max_terms=3, max_exp=2),
    polynomials(RING_XY, max_terms=3, max_exp=2),
    rational_points(2, max_abs=3),
)
def test_evaluation_is_ring_morphism(f, g, point):
    assert (f * g).evaluate(point) == f.evaluate(point) * g.evaluate(point)
    assert (f + g).evaluate(point) == f.evaluate(point) + g.evaluate(point)


def test_shift_translates_origin():
    f = RING_X.parse("x^2")
    assert f.shift([1]) == RING_X.parse("x^2 + 2*x + 1")
    # shifted polynomial evaluated at 0 equals original at the point
    g = RING_XY.parse("x^3 - 2*x*y + 5")
    point = (Fraction(1, 2), Fraction(-3))
    assert g.shift(point).evaluate((0, 0)) == g.evaluate(point)


# ------------------------------------------------------------ leading terms

def test_leading_term_degrevlex_prefers_degree():
    f = RING_XY.parse("x^2 + x*y + y^3")
    assert f.leading_term(DEGREVLEX) == ((0, 3), 1)


def test_leading_term_lex_ignores_degree():
    assert RING_XY.parse("x^2 + y^3").leading_term(LEX) == ((2, 0), 1)


def test_leading_term_local_prefers_low_degree():
    assert RING_X.parse("x + x^2").leading_term(LOCAL_DEGREVLEX) == ((1,), 1)


def test_leading_term_zero_polynomial():
    with pytest.raises(ZeroPolynomial):
        RING_XY.zero().leading_term(DEGREVLEX)


@pytest.mark.parametrize("order", [DEGREVLEX, LEX])
@given(f=nonzero_polynomials(RING_XY), g=nonzero_polynomials(RING_XY))
def test_leading_term_multiplicative_global(order, f, g):
    fm, fc = f.leading_term(order)
    gm, gc = g.leading_term(order)
    pm, pc = (f * g).leading_term(order)
    assert pm == tuple(a + b for a, b in zip(fm, gm))
    assert pc == fc * gc


# ------------------------------------------------------------------- points

def test_parse_point():
    assert parse_point("0,1/2,-3", 3) == (0, Fraction(1, 2), -3)
    with pytest.raises(ArityMismatch):
        parse_point("1,2", 3)
