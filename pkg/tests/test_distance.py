"""Тесты разложения Хана, оценок супремума и достижимости."""
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from core.density import Constant
from core.measure import Atom, Measure, Piece
from core.space import Interval, Space
from services.distance import attainability, hahn, sup_estimate, tv
from services.probes import random_real_sets
from utils.enums import EstimatorClass
from utils.exceptions import SpaceMismatchError, UnsupportedMetricError

UNIT = Space.real_line(0, 1, True, True)
# ε достаточно малы, чтобы потери на концах оставались линейными по ε
FINE_LADDER = (1e-8, 1e-10, 1e-12)
GAMMAS = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(10))
FUNCTION_CLASSES = [e for e in EstimatorClass if e.is_function_class]

# веса восьми ячеек сетки 1/8 и семи атомов в серединах ячеек
WEIGHTS = st.lists(st.integers(0, 3), min_size=15, max_size=15).filter(any)


def _probability(weights) -> Measure:
    """Вероятностная мера: кусочно-постоянная плотность на сетке 1/8 и атомы в точках (2j+1)/16."""
    total = sum(weights)
    pieces = tuple(Piece(Interval.make(Fraction(k, 8), Fraction(k + 1, 8), k == 0, True),
                         Constant(Fraction(8 * w, total)))
                   for k, w in enumerate(weights[:8]) if w)
    atoms = tuple(Atom(Fraction(2 * j + 1, 16), Fraction(w, total)) for j, w in enumerate(weights[8:]) if w)
    return Measure(UNIT, atoms=atoms, pieces=pieces)


def _normalized(weights):
    total = sum(weights)
    return [Fraction(w, total) for w in weights]


def test_exm4_conventions(exm4_pair):
    mu, nu = exm4_pair
    report = tv(mu, nu)
    assert report.sup_sets == Fraction(2, 3)
    assert report.jordan_norm == Fraction(4, 3)
    assert report.paper_tv == Fraction(4, 3)
    assert str(report.hahn.positive_set) == "(1/3,2/3]"
    assert report.hahn.positive_mass == report.hahn.negative_mass == Fraction(2, 3)


def test_exm4_attained_only_by_borel(exm4_pair):
    mu, nu = exm4_pair
    result = attainability(mu, nu)
    assert result.summary() == "Borel only"
    assert str(result.borel_witness) == "(1/3,2/3]"
    assert not result.attained_by_continuous


def test_exm4_estimators(exm4_pair):
    mu, nu = exm4_pair
    decomposition = hahn(mu.difference(nu))
    for estimator in (EstimatorClass.CLOSED_BOUNDED_SETS, EstimatorClass.OPEN_BOUNDED_SETS):
        estimate = sup_estimate(mu, nu, estimator, decomposition=decomposition)
        assert estimate.value == Fraction(2, 3)
        assert estimate.gap > 0
        assert not estimate.attained
        values = [value for _, value in estimate.ladder]
        assert values == sorted(values)
    functions = sup_estimate(mu, nu, EstimatorClass.M_GAMMA, gamma=2)
    assert functions.bound == Fraction(8, 3)
    assert functions.attained


def test_point_masses_on_naturals(naturals):
    report = tv(Measure.dirac(naturals, 1), Measure.dirac(naturals, 2))
    assert report.sup_sets == 1
    assert report.jordan_norm == 2
    assert report.attainability.summary() == "Borel, open, closed, continuous"


def test_point_masses_on_cofinite(cofinite):
    mu, nu = Measure.dirac(cofinite, 1), Measure.dirac(cofinite, 2)
    report = tv(mu, nu)
    assert report.jordan_norm == 2
    assert report.estimates == {}
    assert report.attainability.summary() == "Borel, open, closed"
    with pytest.raises(UnsupportedMetricError):
        sup_estimate(mu, nu, EstimatorClass.CLOSED_BOUNDED_SETS)


def test_space_mismatch(unit, naturals):
    with pytest.raises(SpaceMismatchError):
        tv(Measure.dirac(unit, 0), Measure.dirac(naturals, 1))
    with pytest.raises(SpaceMismatchError):
        sup_estimate(Measure.dirac(unit, 0), Measure.dirac(Space.real_line(), 0), EstimatorClass.M_GAMMA)


def test_equal_measures(exm4_pair):
    mu, _ = exm4_pair
    report = tv(mu, mu, classes=[EstimatorClass.M_GAMMA])
    assert report.jordan_norm == 0
    assert report.sup_sets == 0
    assert report.attainability.attained_by_open
    assert report.attainability.attained_by_closed


@seed(42)
@settings(max_examples=20, deadline=None)
@given(WEIGHTS, WEIGHTS)
def test_search_meets_hahn_optimum_for_every_class(mu_weights, nu_weights):
    mu, nu = _probability(mu_weights), _probability(nu_weights)
    decomposition = hahn(mu.difference(nu))
    for estimator in EstimatorClass:
        estimate = sup_estimate(mu, nu, estimator, epsilons=FINE_LADDER, decomposition=decomposition)
        assert estimate.meets_bound, estimator
        assert estimate.value == estimate.bound
        assert estimate.best_finite <= estimate.bound


@seed(42)
@settings(max_examples=10, deadline=None)
@given(WEIGHTS, WEIGHTS)
def test_function_classes_scale_with_gamma(mu_weights, nu_weights):
    mu, nu = _probability(mu_weights), _probability(nu_weights)
    decomposition = hahn(mu.difference(nu))
    for estimator in FUNCTION_CLASSES:
        for gamma in GAMMAS:
            estimate = sup_estimate(mu, nu, estimator, gamma=gamma, epsilons=FINE_LADDER,
                                    decomposition=decomposition)
            assert estimate.bound == gamma * decomposition.jordan_norm
            assert estimate.value == gamma * decomposition.jordan_norm, (estimator, gamma)


@seed(42)
@settings(max_examples=30, deadline=None)
@given(WEIGHTS, WEIGHTS, WEIGHTS)
def test_distances_are_metrics(first, second, third):
    mu, nu, rho = _probability(first), _probability(second), _probability(third)
    between = hahn(mu.difference(nu))
    assert hahn(mu.difference(mu)).jordan_norm == 0
    assert (between.jordan_norm == 0) == (_normalized(first) == _normalized(second))
    reverse = hahn(nu.difference(mu))
    assert reverse.jordan_norm == between.jordan_norm
    assert reverse.sup_sets == between.sup_sets
    direct, onward = hahn(mu.difference(rho)), hahn(nu.difference(rho))
    assert direct.jordan_norm <= between.jordan_norm + onward.jordan_norm
    assert direct.sup_sets <= between.sup_sets + onward.sup_sets


@seed(42)
@settings(max_examples=30, deadline=None)
@given(WEIGHTS, WEIGHTS)
def test_equal_mass_sup_is_half_jordan(mu_weights, nu_weights):
    decomposition = hahn(_probability(mu_weights).difference(_probability(nu_weights)))
    assert decomposition.sup_sets == decomposition.jordan_norm / 2
    assert decomposition.positive_mass == decomposition.negative_mass


@seed(42)
@settings(max_examples=20, deadline=None)
@given(WEIGHTS, WEIGHTS, st.integers(0, 2 ** 16))
def test_hahn_sets_carry_one_sign(mu_weights, nu_weights, sample_seed):
    d = _probability(mu_weights).difference(_probability(nu_weights))
    decomposition = hahn(d)
    for subset in random_real_sets(UNIT, np.random.default_rng(sample_seed), 12, (0, 1)):
        assert d.mass(decomposition.positive_set.intersection(subset)) >= 0
        assert d.mass(decomposition.negative_set.intersection(subset)) <= 0
