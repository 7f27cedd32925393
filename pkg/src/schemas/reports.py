"""Документ отчёта: единый источник для JSON, таблицы и шаблонов."""
import csv
import io
import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, ValidationError

from core.numbers import Number, format_number
from services.convergence import ConditionVerdict, ConvergenceReport
from services.distance import SupEstimate, TVReport
from services.gallery import GallerySummary
from services.probes import Trace
from utils.enums import ExpectationStatus
from utils.exceptions import ParseError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0"


class Invocation(BaseModel):
    """Команда и разобранные флаги."""
    command: str
    flags: Dict[str, Any] = Field(default_factory=dict)
    seed: Optional[int] = None
    grid: Optional[List[int]] = None


class ReportDocument(BaseModel):
    """
    Отчёт команды.

    Attributes:
        schema_version: Версия формата
        invocation: Команда и флаги
        kind: tv, diagnose или gallery
        results: Результаты в виде JSON-совместимого словаря
        warnings: Расходимости, неопределённые вердикты, расхождения с публикацией
        verdict: Итог для кода возврата: pass, fail или inconclusive
        timestamp: Время формирования (опускается флагом --no-timestamp)
    """
    schema_version: str = SCHEMA_VERSION
    invocation: Invocation
    kind: str
    results: Dict[str, Any]
    warnings: List[str] = Field(default_factory=list)
    verdict: str = "pass"
    timestamp: Optional[str] = None

    def stamp(self) -> "ReportDocument":
        return self.model_copy(update={"timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds")})


def dumps(document: ReportDocument) -> str:
    """Стабильная сериализация: одинаковые входы дают одинаковые байты."""
    return json.dumps(document.model_dump(mode="json", exclude_none=True), ensure_ascii=False, indent=2) + "\n"


def load_report(path: Path) -> ReportDocument:
    """
    Чтение сохранённого отчёта.

    Raises:
        ParseError: Файл не читается или не соответствует формату
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
        return ReportDocument.model_validate_json(text)
    except OSError as exc:
        raise ParseError(f"Не удалось прочитать отчёт: {exc}", str(path)) from exc
    except ValidationError as exc:
        error = exc.errors()[0]
        raise ParseError(error["msg"], f"{path}:{'.'.join(str(p) for p in error['loc'])}") from exc


# Преобразования результатов


def _number(value: Number) -> str:
    return format_number(value)


def _estimate(estimate: SupEstimate) -> Dict[str, Any]:
    return {
        "value": _number(estimate.value),
        "bound": _number(estimate.bound),
        "best_finite": _number(estimate.best_finite),
        "gap": _number(estimate.gap),
        "attained": estimate.attained,
        "meets_bound": estimate.meets_bound,
        "gamma": _number(estimate.gamma),
        "ladder": [[_number(eps), _number(value)] for eps, value in estimate.ladder],
    }


def tv_results(report: TVReport) -> Dict[str, Any]:
    """Результаты команды tv."""
    h = report.hahn
    attainability = report.attainability
    witnesses = {
        "borel": str(attainability.borel_witness),
        "open": str(attainability.open_witness) if attainability.open_witness is not None else None,
        "closed": str(attainability.closed_witness) if attainability.closed_witness is not None else None,
        "continuous": (attainability.continuous_witness.label
                       if attainability.continuous_witness is not None else None),
    }
    return {
        "jordan_norm": _number(report.jordan_norm),
        "sup_sets": _number(report.sup_sets),
        "paper_tv": _number(report.paper_tv),
        "hahn": {
            "positive_set": str(h.positive_set),
            "negative_set": str(h.negative_set),
            "positive_mass": _number(h.positive_mass),
            "negative_mass": _number(h.negative_mass),
        },
        "attainability": {
            "summary": attainability.summary(),
            "witnesses": {key: value for key, value in witnesses.items() if value is not None},
        },
        "estimates": {estimator.value: _estimate(e) for estimator, e in report.estimates.items()},
    }


def _condition(verdict: ConditionVerdict) -> Dict[str, Any]:
    data: Dict[str, Any] = {"verdict": verdict.verdict.value}
    if verdict.witness is not None:
        data["witness"] = verdict.witness
    if verdict.detail:
        data["detail"] = verdict.detail
    return data


def convergence_results(report: ConvergenceReport, traces: bool = False) -> Dict[str, Any]:
    """Результаты команды diagnose; трассы включаются по запросу."""
    data: Dict[str, Any] = {
        "sequence": report.sequence,
        "space": report.space,
        "grid": list(report.grid),
        "tolerance": report.tolerance,
        "modes": {mode.value: _condition(v) for mode, v in report.modes.items()},
        "conditions": {key: _condition(v) for key, v in report.conditions.items()},
        "caveat": report.caveat,
    }
    if report.vague_c0 is not None:
        data["vague_c0"] = _condition(report.vague_c0)
    if traces:
        data["traces"] = {key: [[n, _number(v)] for n, v in trace] for key, trace in report.traces.items()}
    return data


def gallery_results(summary: GallerySummary) -> Dict[str, Any]:
    """Сводка прогона галереи по случаям."""
    cases: Dict[str, List[Dict[str, Any]]] = {}
    for result in summary.results:
        entry = {
            "probe": result.probe,
            "expected": result.expected,
            "actual": result.actual,
            "provenance": result.provenance.value,
            "status": result.status.value,
        }
        if result.args:
            entry["args"] = result.args
        if result.note:
            entry["note"] = result.note
        cases.setdefault(result.case, []).append(entry)
    return {
        "cases": cases,
        "counts": {status.value: summary.count(status) for status in ExpectationStatus},
        "discrepancies": dict(summary.discrepancies),
    }


def gallery_warnings(summary: GallerySummary) -> List[str]:
    warnings = []
    for result in summary.results:
        if result.status == ExpectationStatus.PAPER_DISCREPANCY:
            warnings.append(f"{result.case}: {result.probe} опубликовано {result.expected}, "
                            f"вычислено {result.actual}")
        elif result.status == ExpectationStatus.INCONCLUSIVE:
            warnings.append(f"{result.case}: {result.probe} не определено на данной сетке")
    return warnings


def traces_csv(traces: Dict[str, Trace]) -> str:
    """CSV со столбцами probe_id, n, value для внешних графиков."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["probe_id", "n", "value"])
    for key in sorted(traces):
        for n, value in traces[key]:
            writer.writerow([key, n, _number(value)])
    return buffer.getvalue()
