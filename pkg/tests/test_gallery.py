"""Тесты галереи случаев."""
from fractions import Fraction

import pytest

from core.numbers import INF
from schemas.measures import load_measure
from services.gallery import (CASE_IDS, CaseRun, CaseSpec, ExpectationSpec, case, case_to_dict, check_expectation,
                              data_dir, list_cases, parse_limit, run_all)
from utils.enums import ExpectationStatus, LimitKind, Provenance
from utils.exceptions import ParseError, UnknownCaseError


@pytest.fixture(scope="module")
def summary():
    return run_all()


def test_case_ids():
    assert list_cases() == list(CASE_IDS)
    assert len(CASE_IDS) == 6
    with pytest.raises(UnknownCaseError):
        case("exm9_missing")


def test_case_round_trip():
    for case_id in CASE_IDS:
        item = case(case_id)
        assert CaseSpec.model_validate(case_to_dict(item)) == item.spec
        assert item.id == case_id


def test_pair_case_uses_measure_files(exm4_pair):
    item = case("exm4_attainability")
    mu, nu = item.pair
    assert mu == load_measure(data_dir() / "exm4_mu.json")
    assert (mu, nu) == exm4_pair
    assert item.sequence is None


def test_gallery_has_no_failures(summary):
    assert not summary.failed, [r for r in summary.results if r.status == ExpectationStatus.FAIL]
    assert summary.count(ExpectationStatus.PASS) > 0
    assert {r.case for r in summary.results} == set(CASE_IDS)


def test_published_discrepancies_are_reported(summary):
    disputed = {r.case for r in summary.results if r.status == ExpectationStatus.PAPER_DISCREPANCY}
    assert disputed == {"exm3_oscillating_block", "thm5_cofinite"}
    assert set(summary.discrepancies) == disputed
    for result in summary.results:
        if result.status == ExpectationStatus.PAPER_DISCREPANCY:
            assert result.provenance == Provenance.PAPER


def test_gallery_is_deterministic(summary):
    again = run_all(ids=["exm4_attainability", "thm5_cofinite"])
    expected = [r for r in summary.results if r.case in ("exm4_attainability", "thm5_cofinite")]
    assert again.results == expected


def test_short_grid_is_inconclusive():
    result = run_all(grid=(2, 4, 8), ids=["exm2_escaping_mass"])
    assert not result.failed
    assert result.inconclusive
    assert result.grid == (2, 4, 8)


def test_single_expectation():
    run = CaseRun(case("exm4_attainability"), seed=42, grid=None, tol=1e-6)
    good = ExpectationSpec(probe="sup_sets", expected="2/3", provenance=Provenance.DERIVED)
    assert check_expectation(run, good).status == ExpectationStatus.PASS
    wrong = ExpectationSpec(probe="sup_sets", expected="1/2", provenance=Provenance.DERIVED)
    result = check_expectation(run, wrong)
    assert result.status == ExpectationStatus.FAIL
    assert result.actual == "2/3"
    with pytest.raises(ParseError):
        check_expectation(run, ExpectationSpec(probe="no_such_probe", expected="1", provenance=Provenance.TRIVIAL))


def test_parse_limit():
    assert parse_limit("converges(4/3)") == (LimitKind.CONVERGES, (Fraction(4, 3),))
    assert parse_limit("oscillates({2, 3})") == (LimitKind.OSCILLATES, (2, 3))
    assert parse_limit("diverges(+inf)") == (LimitKind.DIVERGES, (INF,))
    assert parse_limit("inconclusive") == (LimitKind.INCONCLUSIVE, ())
    with pytest.raises(ParseError):
        parse_limit("wanders")


def test_divergent_total_mass_is_infinite():
    run = CaseRun(case("exm1_counting_tails"), seed=42, grid=None, tol=1e-6)
    result = check_expectation(run, ExpectationSpec(probe="total_mass", args={"n": 5}, expected="inf",
                                                    provenance=Provenance.TRIVIAL))
    assert result.status == ExpectationStatus.PASS
    assert result.actual == "inf"


def test_search_limit_meets_hahn_optimum():
    run = CaseRun(case("exm4_attainability"), seed=42, grid=None, tol=1e-6)
    for estimator in ("open_bounded_sets", "closed_bounded_sets", "Mgamma"):
        result = check_expectation(run, ExpectationSpec(probe="search_limit", args={"estimator": estimator},
                                                        expected="2/3" if estimator != "Mgamma" else "4/3",
                                                        provenance=Provenance.DERIVED))
        assert result.status == ExpectationStatus.PASS, result
