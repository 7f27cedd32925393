"""Тесты командной строки."""
import json
from fractions import Fraction

import pytest

from handlers.commands import EXIT_FAILED, EXIT_INPUT_ERROR, EXIT_OK, Flags, cmd_gallery, cmd_tv
from main import main
from services import distance
from services.gallery import data_dir
from utils.enums import EstimatorClass
from utils.exceptions import UnknownCaseError


@pytest.fixture
def exm4_files():
    return str(data_dir() / "exm4_mu.json"), str(data_dir() / "exm4_nu.json")


def _write(path, data) -> str:
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def test_tv_command(tmp_path, capsys, exm4_files):
    out = tmp_path / "tv.json"
    code = main(["tv", *exm4_files, "--classes", "Mgamma,closed_bounded_sets", "--json", str(out), "--no-timestamp"])
    assert code == EXIT_OK
    assert "| jordan_norm | 4/3 |" in capsys.readouterr().out
    document = json.loads(out.read_text(encoding="utf-8"))
    assert document["kind"] == "tv"
    assert document["results"]["paper_tv"] == "4/3"
    assert document["results"]["attainability"]["summary"] == "Borel only"
    assert set(document["results"]["estimates"]) == {"Mgamma", "closed_bounded_sets"}
    assert "timestamp" not in document


def test_tv_result_document(exm4_files):
    document = cmd_tv(*exm4_files, Flags(no_timestamp=True))
    assert document.results["sup_sets"] == "2/3"
    assert document.results["attainability"]["witnesses"]["borel"] == "(1/3,2/3]"
    assert document.timestamp is None
    assert cmd_tv(*exm4_files).timestamp is not None


def test_input_errors(tmp_path, capsys):
    mismatched = _write(tmp_path / "mismatch.json", {"space": "discrete_nat", "rule": "escaping_mass"})
    assert main(["diagnose", mismatched]) == EXIT_INPUT_ERROR
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    assert main(["diagnose", str(broken)]) == EXIT_INPUT_ERROR
    assert main(["tv", str(broken), str(broken)]) == EXIT_INPUT_ERROR
    assert main(["diagnose", str(tmp_path / "absent.json")]) == EXIT_INPUT_ERROR
    assert "Ошибка" in capsys.readouterr().err


def test_argument_errors():
    assert main(["tv"]) == EXIT_INPUT_ERROR
    assert main(["diagnose", "spec.json", "--modes", "strong"]) == EXIT_INPUT_ERROR
    assert main(["diagnose", "spec.json", "--grid", "2,x"]) == EXIT_INPUT_ERROR
    assert main(["--help"]) == EXIT_OK


def test_diagnose_failure_writes_traces(tmp_path, capsys):
    spec = _write(tmp_path / "escaping.json", {"rule": "escaping_mass"})
    traces = tmp_path / "traces.csv"
    assert main(["diagnose", spec, "--traces", str(traces), "--no-timestamp"]) == EXIT_FAILED
    lines = traces.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "probe_id,n,value"
    assert any(line.startswith("tv:sup_sets,") for line in lines)
    assert "Итог: **fail**" in capsys.readouterr().out


def test_flags_are_echoed(tmp_path):
    spec = _write(tmp_path / "cofinite.json", {"rule": "cofinite_atoms"})
    out = tmp_path / "report.json"
    main(["diagnose", spec, "--seed", "7", "--grid", "2,4,8,16,32,64", "--modes", "setwise,tv",
          "--json", str(out), "--no-timestamp"])
    invocation = json.loads(out.read_text(encoding="utf-8"))["invocation"]
    assert invocation["seed"] == 7
    assert invocation["grid"] == [2, 4, 8, 16, 32, 64]
    assert invocation["flags"]["modes"] == ["setwise", "tv"]
    assert invocation["flags"]["no_timestamp"] is True


def test_gallery_commands(capsys):
    assert main(["gallery", "list"]) == EXIT_OK
    assert "exm1_counting_tails" in capsys.readouterr().out
    assert main(["gallery", "show", "exm4_attainability"]) == EXIT_OK
    shown = json.loads(capsys.readouterr().out)
    assert shown["id"] == "exm4_attainability"
    assert main(["gallery", "show", "exm9_missing"]) == EXIT_INPUT_ERROR
    assert main(["gallery", "show"]) == EXIT_INPUT_ERROR
    with pytest.raises(UnknownCaseError):
        cmd_gallery("show", "exm9_missing")
    assert cmd_gallery("list").kind == "cases"


def test_gallery_run_is_reproducible(tmp_path):
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    for out in (first, second):
        assert main(["gallery", "run", "exm4_attainability", "--no-timestamp", "--json", str(out)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    assert "json" not in json.loads(first.read_text(encoding="utf-8"))["invocation"]["flags"]


def test_full_gallery_run(tmp_path, capsys):
    out = tmp_path / "gallery.json"
    assert main(["gallery", "run", "--no-timestamp", "--json", str(out)]) == EXIT_OK
    document = json.loads(out.read_text(encoding="utf-8"))
    assert document["verdict"] != "fail"
    assert document["results"]["counts"]["fail"] == 0
    total_mass = next(entry for entry in document["results"]["cases"]["exm1_counting_tails"]
                      if entry["probe"] == "total_mass")
    assert total_mass["actual"] == "inf"
    assert total_mass["status"] == "pass"
    assert set(document["results"]["discrepancies"]) == {"exm3_oscillating_block", "thm5_cofinite"}
    capsys.readouterr()


def test_tv_reports_search_mismatch(monkeypatch, capsys, exm4_files):
    monkeypatch.setattr(distance, "_candidate_value", lambda *args: Fraction(0))
    document = cmd_tv(*exm4_files, Flags(classes=(EstimatorClass.CLOSED_BOUNDED_SETS,), no_timestamp=True))
    assert document.verdict == "fail"
    assert document.results["estimates"]["closed_bounded_sets"]["meets_bound"] is False
    assert any("closed_bounded_sets" in warning for warning in document.warnings)
    assert main(["tv", *exm4_files, "--classes", "closed_bounded_sets"]) == EXIT_FAILED
    capsys.readouterr()


def test_report_rendering(tmp_path, capsys, exm4_files):
    saved = tmp_path / "tv.json"
    main(["tv", *exm4_files, "--classes", "Mgamma", "--json", str(saved)])
    capsys.readouterr()
    assert main(["report", str(saved), "--format", "md"]) == EXIT_OK
    markdown = capsys.readouterr().out
    assert "# Отчёт measure-modes: tv" in markdown
    assert "| sup_sets | 2/3 |" in markdown
    html = tmp_path / "tv.html"
    assert main(["report", str(saved), "--format", "html", "--output", str(html)]) == EXIT_OK
    assert "<html" in html.read_text(encoding="utf-8")
    assert main(["report", str(saved), "--format", "pdf"]) == EXIT_INPUT_ERROR
    assert main(["report", str(tmp_path / "absent.json")]) == EXIT_INPUT_ERROR
