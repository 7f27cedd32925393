"""Тесты интегрирования пробных функций по мерам."""
import math
from fractions import Fraction

import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from core.density import Constant
from core.measure import Atom, Measure, Piece
from core.numbers import INF
from core.space import Interval, Space
from core.testfn import indicator, linear_combination, random_family
from schemas.literals import parse_function
from services.integrate import integrate, integrate_truncated
from services.quadrature import integrate_adaptive
from services.sequences import counting_tails, oscillating_block, restricted_density
from utils.enums import FunctionClass, IntegralMethod, IntegralStatus
from utils.exceptions import DivergentIntegralError, PreconditionError

UNIT = Space.real_line(0, 1, True, True)
HALF = Measure(UNIT, atoms=(Atom(Fraction(2, 3), Fraction(1, 2)),),
               pieces=(Piece(Interval.make(0, 1, True, True), Constant(Fraction(1, 2))),))


def test_closed_form_against_density():
    seq = oscillating_block()
    square = parse_function("x**2", seq.space)
    result = integrate(square, seq.limit)
    assert result.value == 1
    assert result.method == IntegralMethod.CLOSED_FORM
    assert result.error_bound == 0.0


def test_oscillating_block_terms():
    seq = oscillating_block()
    square = parse_function("x**2", seq.space)
    assert integrate(square, seq.rule(3)).value == Fraction(55, 27)
    assert integrate(square, seq.rule(4)).value == Fraction(79, 24)


def test_divergent_integrals(naturals):
    seq = restricted_density()
    result = integrate(parse_function("x**2", seq.space), seq.limit)
    assert result.status == IntegralStatus.DIVERGENT
    assert result.value == INF
    assert result.direction == 1
    with pytest.raises(DivergentIntegralError):
        result.require_finite()
    reciprocal = parse_function("1/x", naturals)
    tails = integrate(reciprocal, counting_tails().rule(3))
    assert tails.is_divergent
    assert tails.partial_bound is not None


def test_atoms_use_function_values(exm4_pair):
    mu, _ = exm4_pair
    f = parse_function("pw[[0,1/2]: 0; (1/2,1]: 1]", mu.space)
    assert integrate(f, mu).value == Fraction(1, 4) + Fraction(1, 2)


def test_quadrature_path():
    space = Space.real_line(0, INF, True)
    lebesgue = Measure.with_density(space, Interval.make(0, INF, True), Constant(Fraction(1)))
    result = integrate(parse_function("exp(-x)", space), lebesgue)
    assert result.method == IntegralMethod.QUADRATURE
    assert result.value == pytest.approx(1.0, abs=1e-8)
    assert result.is_finite


def test_adaptive_rule_on_finite_interval():
    result = integrate_adaptive(lambda xs: xs ** 2, 0.0, 1.0)
    assert result.value == pytest.approx(1 / 3, abs=1e-12)
    assert result.converged
    peak = integrate_adaptive(lambda xs: 1 / (1 + xs ** 2), -math.inf, math.inf)
    assert peak.value == pytest.approx(math.pi, abs=1e-8)


def test_truncated_integral():
    seq = restricted_density()
    square = parse_function("x**2", seq.space)
    assert integrate_truncated(square, seq.rule(1000), 100) == 9
    assert integrate_truncated(square, seq.rule(1000), 0) == 0
    assert integrate_truncated(square, seq.rule(5), 100) == 4
    with pytest.raises(PreconditionError):
        integrate_truncated(parse_function("x - 2", seq.space), seq.rule(5), 10)


@seed(42)
@settings(max_examples=30, deadline=None)
@given(st.integers(0, 1000), st.integers(-4, 4), st.integers(-4, 4))
def test_linearity(family_seed, a, b):
    f, g = random_family(UNIT, FunctionClass.M_GAMMA, seed=family_seed, count=2)
    combined = linear_combination(f, g, a, b)
    assert integrate(combined, HALF).value == a * integrate(f, HALF).value + b * integrate(g, HALF).value


def test_indicator_integral_is_mass(exm4_pair):
    mu, nu = exm4_pair
    for subset in (mu.space.whole(), mu.space.empty()):
        assert integrate(indicator(subset), nu).value == nu.mass(subset)
