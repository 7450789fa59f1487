from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from graphgreen.algebra import (
    ONE,
    ZERO,
    PoleError,
    Poly,
    RationalFunction,
    evaluate,
    factor_over_q,
    format_factored,
    format_poly,
    format_ratfun,
    parse_rational,
    poly_gcd,
    ratfun_reduce,
    square_free_factorization,
)

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)
polys = st.lists(fractions, max_size=5).map(Poly)
nonzero_polys = polys.filter(lambda p: not p.is_zero())
Z = Poly.z()


def to_sympy(p: Poly):
    x = sympy.Symbol("z")
    return sum((sympy.Rational(c.numerator, c.denominator) * x**k for k, c in enumerate(p.coeffs)), sympy.Integer(0))


# --- examples --------------------------------------------------------------


def test_normalization_strips_trailing_zeros():
    assert Poly([1, 2, 0, 0]) == Poly([1, 2])
    assert Poly([0, 0]).is_zero() and Poly([0]).degree == -1


def test_gcd_examples():
    assert poly_gcd(Z**2 - 1, Z + 1) == Z + 1
    assert poly_gcd(Z.scale(2) - 4, (Z - 2) * (Z + 3)) == Z - 2
    assert poly_gcd(Z**2 + 1, Z - 1) == ONE
    assert poly_gcd(ZERO, Z.scale(3) + 6) == Z + 2
    with pytest.raises(ValueError):
        poly_gcd(ZERO, ZERO)


def test_reduce_example():
    f = ratfun_reduce(Z**2 - 1, (Z - 1) * (Z - 2))
    assert f.num == Z + 1 and f.den == Z - 2


def test_reduce_makes_denominator_monic():
    f = RationalFunction(Poly.const(3), Z.scale(-2) + 4)
    assert f.den == Z - 2 and f.num == Poly.const(Fraction(-3, 2))


def test_evaluate_and_pole():
    f = RationalFunction(Z + 1, Z - 2)
    assert evaluate(f, 0) == Fraction(-1, 2)
    assert f(Fraction(1, 2)) == Fraction(-1)
    with pytest.raises(PoleError) as info:
        evaluate(f, 2)
    assert info.value.point == 2


def test_removable_singularity_is_not_a_pole():
    # (z^2 - 1)/(z - 1) reduces to z + 1, so z = 1 is fine
    f = RationalFunction(Z**2 - 1, Z - 1)
    assert f(1) == 2


def test_zero_denominator_rejected():
    with pytest.raises(ZeroDivisionError):
        RationalFunction(ONE, ZERO)


def test_exact_div_refuses_remainder():
    with pytest.raises(ArithmeticError):
        (Z**2 + 1).exact_div(Z - 1)


def test_parse_rational():
    assert parse_rational("-3/4") == Fraction(-3, 4)
    assert parse_rational(" 2 ") == 2
    for bad in ("x", "1/0", "", None, True):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_formatting():
    p = -(Z**3) + Z.scale(3) + 2
    assert format_poly(p) == "-z^3 + 3*z + 2"
    assert format_poly(Z.scale(Fraction(1, 2))) == "(1/2)*z"
    assert format_poly(ZERO) == "0"
    assert format_factored(p) == "-(z - 2)*(z + 1)^2"
    f = RationalFunction(-Z + 1, Z**2 - Z - 2)
    assert format_ratfun(f) == "(-z + 1) / (z^2 - z - 2)"
    assert format_ratfun(f, factored=True) == "-(z - 1) / ((z - 2)*(z + 1))"


def test_factor_keeps_irreducible_quadratic():
    c, fs = factor_over_q((Z**2 + 1) * (Z - 3) ** 2)
    assert c == 1 and fs == [(Z - 3, 2), (Z**2 + 1, 1)]


def test_json_round_trip():
    f = RationalFunction(Z.scale(Fraction(2, 3)) - 1, Z**2 + 5)
    assert RationalFunction.from_json(f.to_json()) == f
    assert f.to_json()["num"] == ["-1", "2/3"]


# --- properties ------------------------------------------------------------


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO and a * ONE == a


@given(polys, polys)
def test_multiplication_matches_sympy(a, b):
    assert sympy.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0


@given(polys, nonzero_polys)
def test_division_identity(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a and r.degree < b.degree


@given(nonzero_polys, nonzero_polys)
def test_gcd_divides_and_matches_sympy(a, b):
    g = poly_gcd(a, b)
    assert (a % g).is_zero() and (b % g).is_zero()
    x = sympy.Symbol("z")
    ref = sympy.Poly(sympy.gcd(to_sympy(a), to_sympy(b)), x).monic()
    assert sympy.expand(ref.as_expr() - to_sympy(g)) == 0


@given(polys, nonzero_polys, nonzero_polys)
def test_reduce_cancels_common_factor(a, b, c):
    assert RationalFunction(a * c, b * c) == RationalFunction(a, b)


@given(polys, nonzero_polys)
def test_reduce_idempotent(a, b):
    f = RationalFunction(a, b)
    assert RationalFunction(f.num, f.den) == f
    assert f.den.lead == 1


@given(polys, nonzero_polys, fractions)
def test_evaluate_commutes_with_reduction(a, b, z0):
    f = RationalFunction(a, b)
    if b(z0) != 0:
        assert f(z0) == a(z0) / b(z0)


@settings(max_examples=50)
@given(nonzero_polys)
def test_factorization_reconstructs(p):
    for splitter in (square_free_factorization, factor_over_q):
        c, fs = splitter(p)
        prod = Poly.const(c)
        for f, k in fs:
            prod = prod * f**k
        assert prod == p


@given(polys, fractions)
def test_negate_variable(p, z0):
    assert p.negate_variable()(z0) == p(-z0)


def test_reduce_cancels_signs_and_shared_root():
    f = RationalFunction(-((Z - 1) * (Z + 1)), -((Z - 2) * (Z + 1) ** 2))
    assert f == RationalFunction(Z - 1, (Z - 2) * (Z + 1))
