"""Тесты многочленов с рациональными показателями."""
import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from core.numbers import INF
from core.poly import Poly
from utils.exceptions import DivergentIntegralError, IntegrationError

X = sympy.Symbol("x")


def test_tail_integrals():
    assert Poly.monomial(1, -4).integral(1, INF) == Fraction(1, 3)
    assert Poly.monomial(1, -2).integral(1, INF) == 1
    with pytest.raises(DivergentIntegralError) as info:
        Poly.monomial(1, -1).integral(1, INF)
    assert info.value.direction == 1
    with pytest.raises(DivergentIntegralError) as info:
        Poly.monomial(-3, 2).integral(0, INF)
    assert info.value.direction == -1


def test_singularity_inside_interval():
    with pytest.raises(DivergentIntegralError) as info:
        Poly.monomial(1, -2).integral(-1, 1)
    assert info.value.direction == 1
    with pytest.raises(IntegrationError):
        Poly.monomial(1, -1).integral(-1, 1)


def test_log_primitive():
    assert Poly.monomial(1, -1).integral(1, 2) == pytest.approx(math.log(2))


def test_roots_and_sup():
    quarter = Poly.from_coefficients([Fraction(-1, 4), 0, 1])
    assert quarter.roots(0, 1) == [Fraction(1, 2)]
    roots = Poly.from_coefficients([-2, 0, 1]).roots()
    assert [float(r) for r in roots] == pytest.approx([-math.sqrt(2), math.sqrt(2)])
    assert Poly.from_coefficients([0, -1, 1]).sup_abs(0, 1) == Fraction(1, 4)
    assert Poly.monomial(1, -1).sup_abs(0, 1) == INF


def test_sign_pattern():
    parabola = Poly.from_coefficients([Fraction(-1, 4), 0, 1])
    assert not parabola.is_nonnegative_on(0, 1)
    assert parabola.is_nonnegative_on(Fraction(1, 2), 2)
    assert [s for _, _, s in parabola.sign_pattern(0, 1)] == [-1, 1]


def test_from_expr():
    poly = Poly.from_expr(sympy.sympify("3*x**2 + 1/x"), X)
    assert poly(2) == Fraction(25, 2)
    assert Poly.from_expr(sympy.sympify(poly.to_expr()), X) == poly
    assert Poly.from_expr(sympy.sympify("exp(-x)"), X) is None


@seed(42)
@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=4),
       st.integers(-8, 8), st.integers(0, 8), st.integers(0, 8))
def test_integral_additivity(coefficients, a, step1, step2):
    poly = Poly.from_coefficients(coefficients)
    lo, mid, hi = Fraction(a, 4), Fraction(a + step1, 4), Fraction(a + step1 + step2, 4)
    assert poly.integral(lo, mid) + poly.integral(mid, hi) == poly.integral(lo, hi)
    assert poly.integral(hi, lo) == -poly.integral(lo, hi)
