"""Тесты пространств и борелевских множеств."""
from fractions import Fraction

import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from core.numbers import INF
from core.space import Interval, NatSet, RealSet, Space, canonicalize, point_set_distance
from utils.exceptions import DomainError, SpaceMismatchError, UnsupportedMetricError

UNIT = Space.real_line(0, 1, True, True)
NATURALS = Space.discrete_nat()
COFINITE = Space.cofinite_nat()
GRID = [Fraction(k, 24) for k in range(25)]


@st.composite
def unit_sets(draw):
    intervals = []
    for _ in range(draw(st.integers(0, 3))):
        lo, hi = sorted(draw(st.lists(st.integers(0, 12), min_size=2, max_size=2)))
        intervals.append(Interval.make(Fraction(lo, 12), Fraction(hi, 12), draw(st.booleans()), draw(st.booleans())))
    points = [Fraction(k, 12) for k in draw(st.lists(st.integers(0, 12), max_size=2))]
    return RealSet.build(UNIT, intervals, points)


@st.composite
def nat_sets(draw, space=NATURALS):
    period = draw(st.integers(1, 4))
    residues = draw(st.sets(st.integers(0, period - 1)))
    exceptions = draw(st.sets(st.integers(1, 12), max_size=4))
    return NatSet.build(space, period, residues, exceptions)


@seed(42)
@settings(max_examples=60, deadline=None)
@given(unit_sets(), unit_sets())
def test_real_set_algebra(a, b):
    for x in GRID:
        assert a.union(b).contains(x) == (a.contains(x) or b.contains(x))
        assert a.intersection(b).contains(x) == (a.contains(x) and b.contains(x))
        assert a.union(b).complement().contains(x) == a.complement().intersection(b.complement()).contains(x)
    assert a.complement().complement() == a


@seed(42)
@settings(max_examples=60, deadline=None)
@given(unit_sets())
def test_real_closure_contains_interior(a):
    closure, interior = a.closure(), a.interior()
    for x in GRID:
        if interior.contains(x):
            assert a.contains(x)
        if a.contains(x):
            assert closure.contains(x)
    assert closure.is_closed()
    assert interior.is_open()


@seed(42)
@settings(max_examples=60, deadline=None)
@given(nat_sets(), nat_sets())
def test_nat_set_algebra(a, b):
    for n in range(1, 41):
        assert a.union(b).contains(n) == (a.contains(n) or b.contains(n))
        assert a.intersection(b).contains(n) == (a.contains(n) and b.contains(n))
        assert a.complement().contains(n) != a.contains(n)
    assert a.complement().complement() == a


def test_touching_components_merge(unit):
    subset = RealSet.build(unit, [Interval.make(0, Fraction(1, 2)), Interval.make(Fraction(1, 2), 1, True, True)])
    assert str(subset) == "(0,1]"
    assert RealSet.build(unit, [Interval.make(0, Fraction(1, 2))], [Fraction(1, 2)]) == \
        RealSet.build(unit, [Interval.make(0, Fraction(1, 2), False, True)])


def test_complement_keeps_endpoint_flags(unit):
    subset = RealSet.build(unit, [Interval.make(0, Fraction(1, 3), False, True)], [Fraction(2, 3)])
    assert str(subset) == "(0,1/3] u {2/3}"
    assert str(subset.complement()) == "{0} u (1/3,2/3) u (2/3,1]"


def test_closure_and_interior_on_line():
    line = Space.real_line()
    open_unit = RealSet.build(line, [Interval.make(0, 1)])
    assert str(open_unit.closure()) == "[0,1]"
    assert str(RealSet.build(line, [Interval.make(0, 1, True, True)]).interior()) == "(0,1)"
    assert open_unit.is_bounded() and not open_unit.is_compact()
    assert open_unit.closure().is_compact()


def test_compactness_is_relative_to_line():
    domain = Space.real_line(0, 1)
    whole = domain.whole()
    assert whole.is_closed()
    assert not whole.is_compact()
    assert not domain.is_heine_borel
    assert Space.real_line(1, INF, True).is_heine_borel


def test_component_outside_domain(unit):
    with pytest.raises(DomainError):
        RealSet.build(unit, [Interval.make(0, 2)])
    assert str(RealSet.build(unit, [Interval.make(0, 2)], clip=True)) == "(0,1]"


def test_degenerate_domain_rejected():
    with pytest.raises(DomainError):
        Space.real_line(1, 1, True, True)


def test_space_mismatch(unit):
    other = Space.real_line(0, 2, True, True)
    with pytest.raises(SpaceMismatchError):
        unit.whole().union(other.whole())


def test_nat_set_notation(naturals):
    evens = NatSet.residue_class(naturals, 2, [0])
    assert str(evens) == "mod 2{0}"
    assert str(evens.complement()) == "mod 2{1}"
    with_one = evens.union(NatSet.finite(naturals, [1]))
    assert str(with_one) == "mod 2{0} u {1}"
    assert 1 in with_one and 2 in with_one and 3 not in with_one
    assert str(NatSet.cofinite(naturals, [3, 1, 2])) == "co{1,2,3}"
    assert str(NatSet.tail(naturals, 4)) == "co{1,2,3}"
    assert str(naturals.empty()) == "{}"


def test_minimal_period(naturals):
    assert NatSet.build(naturals, 4, [0, 2]) == NatSet.residue_class(naturals, 2, [0])
    assert NatSet.build(naturals, 3, [0, 1, 2]) == naturals.whole()


def test_non_natural_exception(naturals):
    with pytest.raises(DomainError):
        NatSet.finite(naturals, [0])
    with pytest.raises(DomainError):
        NatSet.finite(naturals, [Fraction(1, 2)])


def test_discrete_topology(naturals):
    evens = NatSet.residue_class(naturals, 2, [0])
    assert evens.closure() == evens
    assert evens.interior() == evens
    assert not evens.is_bounded()
    assert NatSet.finite(naturals, [2, 5]).is_compact()
    assert not evens.is_compact()


def test_cofinite_topology(cofinite):
    evens = NatSet.residue_class(cofinite, 2, [0])
    assert evens.closure() == cofinite.whole()
    assert evens.interior().is_empty
    co_one = NatSet.cofinite(cofinite, [1])
    assert co_one.is_open() and not co_one.is_closed()
    assert NatSet.finite(cofinite, [1]).is_closed()
    assert evens.is_compact()
    with pytest.raises(UnsupportedMetricError):
        evens.is_bounded()
    with pytest.raises(UnsupportedMetricError):
        point_set_distance(1, evens)


def test_canonicalize_on_naturals(naturals):
    subset = canonicalize(naturals, [Interval.make(1, 3, True, True)], [5])
    assert str(subset) == "{1,2,3,5}"
    assert canonicalize(naturals, [Interval.make(3, INF, True)]) == NatSet.tail(naturals, 3)
    with pytest.raises(DomainError):
        canonicalize(naturals, [Interval.make(-1, 2, True, True)])


def test_point_set_distance(unit, naturals):
    subset = RealSet.build(unit, [Interval.make(Fraction(1, 4), Fraction(1, 2))])
    assert point_set_distance(Fraction(3, 4), subset) == Fraction(1, 4)
    assert point_set_distance(Fraction(1, 4), subset) == 0
    assert point_set_distance(1, NatSet.finite(naturals, [4, 9])) == 3
    assert point_set_distance(Fraction(1, 2), unit.empty()) == INF


@seed(42)
@settings(max_examples=100, deadline=None)
@given(unit_sets())
def test_real_open_iff_complement_closed(a):
    assert a.is_open() == a.complement().is_closed()
    assert a.is_closed() == a.complement().is_open()


@seed(42)
@settings(max_examples=100, deadline=None)
@given(st.one_of(nat_sets(), nat_sets(COFINITE)))
def test_nat_open_iff_complement_closed(a):
    assert a.is_open() == a.complement().is_closed()
    assert a.is_closed() == a.complement().is_open()


@seed(42)
@settings(max_examples=60, deadline=None)
@given(st.sets(st.integers(1, 40), max_size=8), st.sets(st.integers(1, 40), max_size=8))
def test_cofinite_open_sets_intersect(first, second):
    a, b = NatSet.cofinite(COFINITE, first), NatSet.cofinite(COFINITE, second)
    assert a.is_open() and b.is_open()
    common = a.intersection(b)
    assert not common.is_empty
    assert common.is_open()
    assert any(common.contains(n) for n in range(1, 42))


@seed(42)
@settings(max_examples=60, deadline=None)
@given(nat_sets(COFINITE), nat_sets(COFINITE))
def test_cofinite_nonempty_open_sets_meet(a, b):
    if a.is_open() and b.is_open() and not a.is_empty and not b.is_empty:
        assert not a.intersection(b).is_empty
