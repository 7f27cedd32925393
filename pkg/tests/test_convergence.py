"""Тесты проверок сходимости."""
import pytest

from core.space import Interval, NatSet, RealSet
from core.testfn import constant
from schemas.literals import parse_function
from services.convergence import (check_F, check_S, check_setwise_battery, check_truncation_blowup,
                                  check_tv, check_vague_battery, check_weak, diagnose)
from services.sequences import (atom_to_boundary, cofinite_atoms, escaping_mass, random_convergent,
                                random_divergent, restricted_density)
from utils.enums import Mode, SetwiseCondition, VagueCondition, Verdict
from utils.exceptions import PreconditionError, UnsupportedMetricError


def test_set_checks_on_escaping_mass():
    seq = escaping_mass()
    assert check_S(seq, [seq.space.whole()]).verdict == Verdict.FAIL
    bounded = RealSet.build(seq.space, [Interval.make(1, 2, True, True)])
    assert check_S(seq, [bounded]).verdict == Verdict.PASS
    assert check_S(seq, []).verdict == Verdict.PASS


def test_cofinite_atoms_fail_on_evens():
    seq = cofinite_atoms()
    evens = NatSet.residue_class(seq.space, 2, [0])
    result = check_S(seq, [evens])
    assert result.failed
    assert result.witness == str(evens)


def test_function_checks():
    seq = escaping_mass()
    with pytest.raises(PreconditionError):
        check_F(seq, [])
    assert check_F(seq, [constant(seq.space, 1)]).failed
    assert check_weak(seq).failed


def test_total_variation():
    assert check_tv(escaping_mass()).failed
    assert check_tv(restricted_density()).passed


def test_vague_battery_needs_metric():
    with pytest.raises(UnsupportedMetricError):
        check_vague_battery(cofinite_atoms())


def test_diagnose_escaping_mass():
    report = diagnose(escaping_mass())
    assert report.modes[Mode.VAGUE].passed
    assert report.modes[Mode.WEAK].failed
    assert report.modes[Mode.SETWISE].failed
    assert report.modes[Mode.TV].failed
    assert report.failed
    assert "tv:sup_sets" in report.traces
    assert "vague.cc_functions" in report.conditions
    assert "setwise.all_sets" in report.conditions


def test_mass_escaping_through_open_end():
    seq = atom_to_boundary()
    assert check_vague_battery(seq)[VagueCondition.CC_FUNCTIONS].passed
    assert check_setwise_battery(seq)[SetwiseCondition.ALL_SETS].failed


def test_random_convergent_sequence():
    report = diagnose(random_convergent(3), modes=[Mode.VAGUE, Mode.WEAK])
    assert report.modes[Mode.VAGUE].passed
    assert report.modes[Mode.WEAK].passed


def test_random_divergent_sequence():
    battery = check_vague_battery(random_divergent(1))
    for condition in (VagueCondition.CC_FUNCTIONS, VagueCondition.COMPACT_AND_OPEN_SETS, VagueCondition.SANDWICH):
        assert battery[condition].failed


def test_short_grid_is_inconclusive():
    report = diagnose(escaping_mass(grid=(2, 4, 8)))
    assert not report.failed
    assert any("слишком коротка" in w for w in report.warnings)


def test_truncation_blowup():
    seq = restricted_density()
    square = parse_function("x**2", seq.space)
    assert check_truncation_blowup(seq, square).passed
    short = check_truncation_blowup(seq.with_grid((2, 4, 8)), square)
    assert short.verdict == Verdict.INCONCLUSIVE
    with pytest.raises(PreconditionError):
        check_truncation_blowup(seq, constant(seq.space, 1))


@pytest.mark.parametrize("seed_value", range(10))
def test_random_convergent_battery(seed_value):
    battery = check_vague_battery(random_convergent(seed_value))
    assert set(battery) == set(VagueCondition)
    assert battery[VagueCondition.CC_FUNCTIONS].passed
    for condition, verdict in battery.items():
        assert not verdict.failed, (condition, verdict.detail)


@pytest.mark.parametrize("seed_value", range(10))
def test_random_divergent_battery(seed_value):
    battery = check_vague_battery(random_divergent(seed_value))
    assert set(battery) == set(VagueCondition)
    assert battery[VagueCondition.CC_FUNCTIONS].failed
    # при нарушенном C_c-условии ни одно равносильное условие не выполняется
    for condition, verdict in battery.items():
        assert verdict.verdict != Verdict.PASS, condition
