"""Тесты разбора литералов и JSON-описаний."""
import json
import math
from fractions import Fraction

import pytest

from core.measure import Atom
from core.numbers import INF
from core.space import NatSet
from schemas.literals import is_template, parse_function, parse_number, parse_set
from schemas.measures import MeasureSpec, SequenceSpec, load_measure, load_sequence, measure_to_spec, parse_space
from utils.exceptions import ParseError, SpaceMismatchError


def test_numbers():
    assert parse_number("1/3") == Fraction(1, 3)
    assert parse_number(2) == 2
    assert parse_number("inf") == INF
    assert parse_number("-inf") == -INF
    assert parse_number("sqrt(2)") == pytest.approx(math.sqrt(2))
    assert parse_number("(3+(-1)**n)/(2*n**2)", n=2) == Fraction(1, 2)
    with pytest.raises(ParseError):
        parse_number("1/n")
    with pytest.raises(ParseError):
        parse_number(True)
    with pytest.raises(ParseError):
        parse_number("1/(")


def test_real_sets(unit):
    assert str(parse_set("(0,1/3] u {2/3}", unit)) == "(0,1/3] u {2/3}"
    assert str(parse_set("X \\ {1/2}", unit)) == "[0,1/2) u (1/2,1]"
    assert str(parse_set("[0,1/2) ∪ [1/2,1]", unit)) == "[0,1]"
    assert parse_set("{}", unit).is_empty
    assert str(parse_set("(0,1/n)", unit, n=4)) == "(0,1/4)"


def test_natural_sets(naturals):
    assert str(parse_set("mod 2{0} u {1}", naturals)) == "mod 2{0} u {1}"
    assert parse_set("co{1,2,3}", naturals) == NatSet.tail(naturals, 4)
    assert parse_set("{3..}", naturals) == NatSet.tail(naturals, 3)
    assert str(parse_set("{1..3}", naturals)) == "{1,2,3}"
    assert parse_set("{n..}", naturals, n=5) == NatSet.tail(naturals, 5)


@pytest.mark.parametrize("text", ["co{1}", "mod 2{0}", "(0,2)", "(0,1/2", "[0,1,2]", "", "(0,1) u "])
def test_bad_real_sets(unit, text):
    with pytest.raises(ParseError):
        parse_set(text, unit)


def test_piecewise_function(unit):
    tent = parse_function("pw[[0,1/2]: x; (1/2,1]: 1 - x]", unit)
    assert tent(Fraction(1, 4)) == Fraction(1, 4)
    assert tent(Fraction(3, 4)) == Fraction(1, 4)
    assert tent.bound == Fraction(1, 2)
    assert tent.label == "pw[[0,1/2]: x; (1/2,1]: 1 - x]"
    assert tent.is_exact
    with pytest.raises(ParseError):
        parse_function("pw[[0,1/2]: 1; [1/2,1]: 2]", unit)
    with pytest.raises(ParseError):
        parse_function("pw[[0,1/2] 1]", unit)
    with pytest.raises(ParseError):
        parse_function("x + y", unit)


def test_expression_function(unit):
    f = parse_function("exp(-x)", unit, label="e")
    assert not f.is_exact
    assert f.bound == INF
    assert f.label == "e"
    assert f(0) == pytest.approx(1.0)


def test_templates():
    assert is_template("1/n")
    assert is_template("(3+(-1)**n)/(2*n**2)")
    assert not is_template("inf")
    assert not is_template("sin(x)")
    assert not is_template(3)


def test_spaces():
    assert str(parse_space("real_line[1,inf)")) == "real_line[1,inf)"
    assert parse_space("discrete_nat").is_natural
    with pytest.raises(ParseError):
        parse_space("hilbert")


def test_measure_spec_round_trip(exm4_pair):
    for m in exm4_pair:
        data = measure_to_spec(m)
        rebuilt = MeasureSpec.model_validate(json.loads(json.dumps(data))).build()
        assert rebuilt.space == m.space
        assert rebuilt.atoms == m.atoms
        assert rebuilt.total_mass() == m.total_mass()
        assert measure_to_spec(rebuilt) == data


def test_discrete_spec(unit):
    spec = MeasureSpec.model_validate({"space": "discrete_nat",
                                       "discrete": {"rule": "geometric", "ratio": "1/2", "support": "mod 2{0}"}})
    assert spec.build().total_mass() == Fraction(1, 3)
    bad = MeasureSpec.model_validate({"space": "real_line", "discrete": [{"rule": "counting"}]})
    with pytest.raises(ParseError):
        bad.build()
    with pytest.raises(SpaceMismatchError):
        MeasureSpec.model_validate({"space": "discrete_nat"}).build(unit)


def test_sequence_templates():
    spec = SequenceSpec.model_validate({
        "space": "real_line[0,1]",
        "rule": {"atoms": [{"at": "1/n", "mass": 1}]},
        "limit": {"atoms": [{"at": 0, "mass": 1}]},
        "grid": [1, 2, 4],
    })
    seq = spec.build()
    assert seq.grid == (1, 2, 4)
    assert seq.rule(4).atoms == (Atom(Fraction(1, 4), Fraction(1)),)
    assert seq.name == "template"
    assert spec.build([3, 5]).grid == (3, 5)


def test_sequence_spec_errors():
    with pytest.raises(SpaceMismatchError):
        SequenceSpec.model_validate({"space": "discrete_nat", "rule": "escaping_mass"}).build()
    with pytest.raises(ParseError):
        SequenceSpec.model_validate({"rule": "no_such_sequence"}).build()
    with pytest.raises(ParseError):
        SequenceSpec.model_validate({"space": "real_line", "rule": {"atoms": []}}).build()
    with pytest.raises(SpaceMismatchError):
        SequenceSpec.model_validate({"space": "real_line[0,1]", "rule": {"atoms": []},
                                     "limit": {"space": "discrete_nat"}}).build()


def test_load_errors_carry_location(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text('{"space": "discrete_nat",\n "atoms": [}', encoding="utf-8")
    with pytest.raises(ParseError) as info:
        load_measure(broken)
    assert info.value.location.startswith(f"{broken}:2:")

    missing = tmp_path / "missing.json"
    missing.write_text('{"space": "discrete_nat", "atoms": [{"at": 1}]}', encoding="utf-8")
    with pytest.raises(ParseError) as info:
        load_measure(missing)
    assert info.value.location == f"{missing}:atoms.0.mass"

    sequence = tmp_path / "sequence.json"
    sequence.write_text('{"rule": "counting_tails", "grid": [1, 2, 3]}', encoding="utf-8")
    assert load_sequence(sequence).grid == (1, 2, 3)
    assert load_sequence(sequence, [5, 6]).grid == (5, 6)

    with pytest.raises(ParseError):
        load_measure(tmp_path / "absent.json")
