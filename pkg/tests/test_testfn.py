"""Тесты пробных функций."""
from fractions import Fraction

import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from core.density import Constant
from core.measure import Atom, Measure, Piece
from core.numbers import INF
from core.space import Interval, NatSet, RealSet, Space
from core.testfn import (bump_over_closed, bump_under_open, check_holder, constant, indicator,
                         linear_combination, random_family, truncate)
from schemas.literals import parse_function
from services.integrate import integrate
from utils.enums import FunctionClass, Regularity
from utils.exceptions import (DegenerateInputError, PreconditionError, UnsupportedClassError,
                              UnsupportedMetricError)

UNIT = Space.real_line(0, 1, True, True)
# n ≥ 32: полосы ширины 1/n не выходят за ячейку сетки 1/16
LADDER = [2 ** k for k in range(5, 11)]


@st.composite
def grid_measures(draw):
    """Вероятностная мера на [0, 1]: плотность постоянна на ячейках 1/8, атомы в точках (2j+1)/16."""
    weights = draw(st.lists(st.integers(0, 3), min_size=15, max_size=15).filter(any))
    total = sum(weights)
    pieces = tuple(Piece(Interval.make(Fraction(k, 8), Fraction(k + 1, 8), k == 0, True),
                         Constant(Fraction(8 * w, total)))
                   for k, w in enumerate(weights[:8]) if w)
    atoms = tuple(Atom(Fraction(2 * j + 1, 16), Fraction(w, total)) for j, w in enumerate(weights[8:]) if w)
    return Measure(UNIT, atoms=atoms, pieces=pieces)


@st.composite
def grid_intervals(draw):
    """1-3 пары концов на сетке 1/16."""
    ends = st.lists(st.integers(0, 16), min_size=2, max_size=2, unique=True)
    pairs = draw(st.lists(ends, min_size=1, max_size=3))
    return [(Fraction(min(p), 16), Fraction(max(p), 16)) for p in pairs]


def _closed(ends) -> RealSet:
    return RealSet.build(UNIT, [Interval.make(lo, hi, True, True) for lo, hi in ends])


def _open(ends) -> RealSet:
    return RealSet.build(UNIT, [Interval.make(lo, hi) for lo, hi in ends])


def test_bump_over_closed(unit):
    subset = RealSet.build(unit, [Interval.make(Fraction(1, 4), Fraction(1, 2), True, True)])
    bump = bump_over_closed(subset, 4)
    assert bump(Fraction(3, 8)) == 1
    assert bump(Fraction(5, 8)) == Fraction(1, 2)
    assert bump(1) == 0
    assert bump.holder == (1, 4)
    assert bump.has(Regularity.CONTINUOUS)
    assert bump.support_compact


def test_bump_under_open():
    line = Space.real_line()
    subset = RealSet.build(line, [Interval.make(0, 1)])
    bump = bump_under_open(subset, 4)
    assert bump(Fraction(1, 2)) == 1
    assert bump(Fraction(1, 8)) == Fraction(1, 2)
    assert bump(0) == 0
    assert bump(2) == 0
    with pytest.raises(DegenerateInputError):
        bump_under_open(RealSet.build(line, [Interval.make(0, Fraction(1, 10))]), 4)


def test_bump_preconditions(unit, cofinite):
    half_open = RealSet.build(unit, [Interval.make(0, Fraction(1, 2))])
    with pytest.raises(PreconditionError):
        bump_over_closed(half_open, 2)
    with pytest.raises(PreconditionError):
        bump_under_open(unit.whole().difference(half_open), 2)
    with pytest.raises(PreconditionError):
        bump_over_closed(unit.whole(), 0)
    with pytest.raises(UnsupportedMetricError):
        bump_over_closed(NatSet.finite(cofinite, [1]), 1)


def test_bumps_on_naturals(naturals):
    evens = NatSet.residue_class(naturals, 2, [0])
    assert bump_over_closed(evens, 3)(4) == 1
    assert bump_over_closed(evens, 3)(5) == 0
    assert bump_under_open(evens, 3)(2) == 1


def test_random_family_is_deterministic(unit):
    first = [f.describe() for f in random_family(unit, FunctionClass.CC, seed=3)]
    second = [f.describe() for f in random_family(unit, FunctionClass.CC, seed=3)]
    assert first == second
    assert first != [f.describe() for f in random_family(unit, FunctionClass.CC, seed=4)]


def test_compact_support_family():
    family = random_family(Space.real_line(), FunctionClass.CC, seed=1, count=6)
    assert [f.label for f in family] == [f"Cc#{i}" for i in range(6)]
    for f in family:
        assert f.support_compact
        assert f.bound <= 1
        assert f.has(Regularity.VANISHES_AT_INFINITY)


def test_natural_c0_family(naturals):
    family = random_family(naturals, FunctionClass.C0, seed=0, count=3)
    assert family[0].label == "1/n"
    assert family[0](4) == Fraction(1, 4)
    assert all(f.has(Regularity.VANISHES_AT_INFINITY) for f in family)


def test_cofinite_families(cofinite):
    for f in random_family(cofinite, FunctionClass.CB, seed=5, count=4):
        assert f(1) == f(50)
    assert len(random_family(cofinite, FunctionClass.M_GAMMA, seed=5, count=4)) == 4
    with pytest.raises(UnsupportedClassError):
        random_family(cofinite, FunctionClass.HOLDER)
    with pytest.raises(UnsupportedClassError):
        check_holder(constant(cofinite, 1), 1, 1)


def test_check_holder(unit):
    subset = RealSet.build(unit, [Interval.make(Fraction(1, 4), Fraction(1, 2), True, True)])
    bump = bump_over_closed(subset, 4)
    assert check_holder(bump, 1, 4, seed=7)
    assert not check_holder(bump, 1, 1, seed=7)


def test_truncate():
    square = parse_function("x**2", Space.real_line())
    assert square.bound == INF
    cut = truncate(square, 4)
    assert cut.bound == 4
    assert cut(Fraction(3, 2)) == Fraction(9, 4)
    assert cut(2) == 0
    assert cut(-3) == 0
    assert cut.has(Regularity.BOUNDED_MEASURABLE)


def test_indicator_and_combination(unit):
    left = indicator(RealSet.build(unit, [Interval.make(0, Fraction(1, 2), True, True)]))
    combined = linear_combination(left, constant(unit, 1), 2, -1)
    assert combined(Fraction(1, 4)) == 1
    assert combined(Fraction(3, 4)) == -1
    assert combined.bound == 3
    assert not left.has(Regularity.CONTINUOUS)


@seed(42)
@settings(max_examples=20, deadline=None)
@given(grid_measures(), grid_intervals())
def test_bump_over_closed_decreases_to_mass(nu, ends):
    subset = _closed(ends)
    target = nu.mass(subset)
    values = [integrate(bump_over_closed(subset, n), nu).value for n in LADDER]
    assert values == sorted(values, reverse=True)
    assert all(value >= target for value in values)
    # избыток даёт только внешняя полоса ширины 1/n
    excess = [(value - target) * n for value, n in zip(values, LADDER)]
    assert len(set(excess)) == 1
    assert values[-1] - target <= Fraction(24 * len(subset.breakpoints()), LADDER[-1])


@seed(42)
@settings(max_examples=20, deadline=None)
@given(grid_measures(), grid_intervals())
def test_bump_under_open_increases_to_mass(nu, ends):
    subset = _open(ends)
    target = nu.mass(subset)
    values = [integrate(bump_under_open(subset, n), nu).value for n in LADDER]
    assert values == sorted(values)
    assert all(value <= target for value in values)
    deficit = [(target - value) * n for value, n in zip(values, LADDER)]
    assert len(set(deficit)) == 1
    assert target - values[-1] <= Fraction(24 * len(subset.breakpoints()), LADDER[-1])


@seed(42)
@settings(max_examples=10, deadline=None)
@given(grid_intervals(), st.sampled_from(LADDER), st.integers(0, 2 ** 16))
def test_bumps_are_lipschitz(ends, n, sample_seed):
    assert check_holder(bump_over_closed(_closed(ends), n), 1, n, pairs=10_000, seed=sample_seed)
    assert check_holder(bump_under_open(_open(ends), n), 1, n, pairs=10_000, seed=sample_seed)
