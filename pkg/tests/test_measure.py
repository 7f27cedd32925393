"""Тесты символьных мер."""
import math
from fractions import Fraction

import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from core.density import Constant, Power
from core.measure import Atom, DiscreteRule, Measure, Piece, SignedMeasure, counting_measure
from core.numbers import INF
from core.space import Interval, NatSet, RealSet, Space
from utils.enums import RuleKind, TailKind
from utils.exceptions import DivergentMassError, DomainError, PreconditionError, SpaceMismatchError

UNIT = Space.real_line(0, 1, True, True)
# Лебег на [0, 1] плюс атомы в 1/3 и 3/4
MIXED = Measure(UNIT, atoms=(Atom(Fraction(1, 3), Fraction(1, 2)), Atom(Fraction(3, 4), 2)),
                pieces=(Piece(Interval.make(0, 1, True, True), Constant(Fraction(1))),))


@st.composite
def unit_sets(draw):
    lo, hi = sorted(draw(st.lists(st.integers(0, 12), min_size=2, max_size=2)))
    interval = Interval.make(Fraction(lo, 12), Fraction(hi, 12), draw(st.booleans()), draw(st.booleans()))
    points = [Fraction(k, 12) for k in draw(st.lists(st.integers(0, 12), max_size=2))]
    return RealSet.build(UNIT, [interval], points)


def test_exm4_masses(exm4_pair):
    mu, nu = exm4_pair
    middle = RealSet.build(mu.space, [Interval.make(Fraction(1, 3), Fraction(2, 3), False, True)])
    assert mu.total_mass() == 1
    assert nu.total_mass() == 1
    assert mu.mass(middle) == Fraction(2, 3)
    assert nu.mass(middle) == 0
    assert nu.mass(RealSet.build(nu.space, [Interval.make(Fraction(1, 3), Fraction(1, 2), True)])) == Fraction(1, 3)
    assert nu.mass(RealSet.build(nu.space, [Interval.make(Fraction(1, 3), Fraction(1, 2))])) == 0
    assert mu.is_probability() and nu.is_probability()


def test_atoms_merge():
    m = Measure(UNIT, atoms=(Atom(Fraction(1, 2), 1), Atom(Fraction(1, 2), 2)))
    assert m.atoms == (Atom(Fraction(1, 2), Fraction(3)),)
    assert m.atom_mass(Fraction(1, 2)) == 3


def test_counting_tail(naturals):
    tail = counting_measure(naturals, NatSet.tail(naturals, 5))
    assert tail.mass(NatSet.finite(naturals, range(1, 11))) == 6
    assert tail.discrete[0].tail == TailKind.DIVERGENT
    assert not tail.is_finite
    with pytest.raises(DivergentMassError) as info:
        tail.total_mass()
    assert info.value.direction == 1
    assert info.value.partial_bound > 0


def test_power_and_geometric_rules(naturals):
    whole = naturals.whole()
    basel = Measure(naturals, discrete=(DiscreteRule(RuleKind.POWER, Fraction(1), whole, Fraction(-2)),))
    assert basel.total_mass() == pytest.approx(math.pi ** 2 / 6, rel=1e-9)
    halves = Measure(naturals, discrete=(DiscreteRule(RuleKind.GEOMETRIC, Fraction(1), whole, ratio=Fraction(1, 2)),))
    assert halves.total_mass() == 1
    evens = NatSet.residue_class(naturals, 2, [0])
    assert halves.mass(evens) == Fraction(1, 3)
    assert halves.discrete[0].weight(3) == Fraction(1, 8)


def test_density_on_half_line():
    space = Space.real_line(1, INF, True)
    m = Measure.with_density(space, Interval.make(1, INF, True), Power(Fraction(1), Fraction(-4)))
    assert m.total_mass() == Fraction(1, 3)
    assert m.mass(RealSet.build(space, [Interval.make(1, 2, True, True)])) == Fraction(7, 24)


def test_negative_parts_rejected(unit, naturals):
    with pytest.raises(PreconditionError):
        Measure.dirac(unit, Fraction(1, 2), -1)
    with pytest.raises(PreconditionError):
        Measure.with_density(unit, Interval.make(0, 1, True, True), Constant(Fraction(-1)))
    with pytest.raises(PreconditionError):
        counting_measure(naturals, naturals.whole(), -1)
    with pytest.raises(PreconditionError):
        MIXED.scale(-1)
    signed = SignedMeasure.dirac(unit, Fraction(1, 2), -1)
    assert signed.total_mass() == -1


def test_domain_checks(unit, naturals):
    with pytest.raises(DomainError):
        Measure.dirac(unit, 2)
    with pytest.raises(DomainError):
        Measure.dirac(naturals, Fraction(1, 2))
    with pytest.raises(DomainError):
        Measure.with_density(unit, Interval.make(0, 2, True, True), Constant(Fraction(1)))
    with pytest.raises(SpaceMismatchError):
        MIXED.mass(naturals.whole())


def test_difference_and_support(exm4_pair):
    mu, nu = exm4_pair
    d = mu.difference(nu)
    assert not isinstance(d, Measure)
    assert d.total_mass() == 0
    assert mu.add(nu).total_mass() == 2
    assert isinstance(mu.add(nu), Measure)
    assert str(nu.support()) == "[0,1/3] u (2/3,1]"


@seed(42)
@settings(max_examples=60, deadline=None)
@given(unit_sets(), unit_sets())
def test_additivity(a, b):
    assert MIXED.mass(a.union(b)) + MIXED.mass(a.intersection(b)) == MIXED.mass(a) + MIXED.mass(b)
    assert MIXED.mass(a) + MIXED.mass(a.complement()) == MIXED.total_mass()


@seed(42)
@settings(max_examples=60, deadline=None)
@given(unit_sets(), unit_sets())
def test_restriction(a, b):
    assert MIXED.restrict(a).mass(b) == MIXED.mass(a.intersection(b))
    assert MIXED.scale(3).mass(a) == 3 * MIXED.mass(a)
