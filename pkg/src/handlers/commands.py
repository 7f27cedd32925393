"""Обработчики команд командной строки."""
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from pydantic import ValidationError

from config import get_config
from schemas.measures import load_measure, load_sequence
from schemas.reports import (
    Invocation,
    ReportDocument,
    convergence_results,
    dumps,
    gallery_results,
    gallery_warnings,
    load_report,
    traces_csv,
    tv_results,
)
from services import gallery
from services.convergence import diagnose
from services.distance import tv
from services.report import render
from utils.enums import EstimatorClass, Mode, Verdict
from utils.exceptions import MeasureModesError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT_ERROR = 2


@dataclass(frozen=True)
class Flags:
    """
    Общие флаги команд.

    Attributes:
        json: Путь для ReportDocument в JSON
        traces: Путь для CSV-трасс
        seed: Зерно случайных семейств
        grid: Сетка n
        tol: Точность пределов
        no_timestamp: Не записывать время формирования
        modes: Режимы для diagnose
        classes: Классы оценок для tv (None: все)
    """

    json: Optional[Path] = None
    traces: Optional[Path] = None
    seed: Optional[int] = None
    grid: Optional[Tuple[int, ...]] = None
    tol: Optional[float] = None
    no_timestamp: bool = False
    modes: Optional[Tuple[Mode, ...]] = None
    classes: Optional[Tuple[EstimatorClass, ...]] = None

    def echo(self) -> Dict[str, Any]:
        """
        Флаги, влияющие на результат, в виде для JSON.

        Пути вывода (--json, --traces) не попадают в отчёт: одинаковые
        входы дают одинаковые байты независимо от места записи.
        """
        echoed: Dict[str, Any] = {}
        for name in ("tol", "no_timestamp"):
            value = getattr(self, name)
            if value:
                echoed[name] = value
        if self.modes is not None:
            echoed["modes"] = [m.value for m in self.modes]
        if self.classes is not None:
            echoed["classes"] = [c.value for c in self.classes]
        return echoed


def _invocation(command: str, flags: Flags) -> Invocation:
    return Invocation(command=command, flags=flags.echo(), seed=flags.seed,
                      grid=list(flags.grid) if flags.grid else None)


def _finish(document: ReportDocument, flags: Flags) -> ReportDocument:
    return document if flags.no_timestamp else document.stamp()


def cmd_tv(file_a: Path, file_b: Path, flags: Flags = Flags()) -> ReportDocument:
    """
    Расстояние полной вариации между двумя мерами из JSON-файлов.

    Args:
        file_a: Описание μ
        file_b: Описание ν
        flags: Флаги команды

    Returns:
        ReportDocument: jordan_norm, sup_sets, paper_tv, оценки и достижимость
    """
    mu, nu = load_measure(file_a), load_measure(file_b)
    report = tv(mu, nu, classes=flags.classes)
    results = tv_results(report)
    warnings = [] if mu.space.is_metric else [f"Оценки по классам недоступны: {mu.space} неметризуемо"]
    mismatches = report.mismatches()
    warnings += [f"Оценка {e.value}: поиск не сходится к оптимуму Хана" for e in mismatches]
    document = ReportDocument(invocation=_invocation(f"tv {file_a} {file_b}", flags), kind="tv",
                              results=results, warnings=warnings,
                              verdict=Verdict.FAIL.value if mismatches else Verdict.PASS.value)
    logger.info(f"tv {file_a} {file_b}: sup_sets = {results['sup_sets']}")
    return _finish(document, flags)


def cmd_diagnose(spec: Path, flags: Flags = Flags()) -> ReportDocument:
    """
    Диагностика сходимости последовательности из описания.

    Args:
        spec: JSON-описание последовательности
        flags: Флаги команды

    Returns:
        ReportDocument: Вердикты по режимам и условиям; verdict = fail при отказе хотя бы одного режима
    """
    seq = load_sequence(spec, list(flags.grid) if flags.grid else None)
    report = diagnose(seq, modes=flags.modes, seed=flags.seed, tol=flags.tol)
    if flags.traces is not None:
        Path(flags.traces).write_text(traces_csv(report.traces), encoding="utf-8")
        logger.info(f"Трассы записаны: {flags.traces}")
    if report.failed:
        verdict = Verdict.FAIL
    elif any(v.verdict == Verdict.INCONCLUSIVE for v in report.modes.values()):
        verdict = Verdict.INCONCLUSIVE
    else:
        verdict = Verdict.PASS
    invocation = Invocation(command=f"diagnose {spec}", flags=flags.echo(), seed=report.seed, grid=list(report.grid))
    document = ReportDocument(invocation=invocation, kind="diagnose", results=convergence_results(report),
                              warnings=list(report.warnings), verdict=verdict.value)
    return _finish(document, flags)


def cmd_gallery(sub: str, case_id: Optional[str] = None, flags: Flags = Flags()) -> ReportDocument:
    """
    Галерея: list, show <id> или run.

    Raises:
        UnknownCaseError: Неизвестный случай в show
        ValueError: Неизвестная подкоманда
    """
    if sub == "list":
        cases = [{"id": case_id_, "title": gallery.load_spec(case_id_).title} for case_id_ in gallery.list_cases()]
        document = ReportDocument(invocation=_invocation("gallery list", flags), kind="cases",
                                  results={"cases": cases})
    elif sub == "show":
        if not case_id:
            raise ValueError("Для gallery show нужен идентификатор случая")
        item = gallery.case(case_id)
        document = ReportDocument(invocation=_invocation(f"gallery show {case_id}", flags), kind="case",
                                  results=gallery.case_to_dict(item))
    elif sub == "run":
        seed = get_config().SEED if flags.seed is None else flags.seed
        ids = [case_id] if case_id else None
        summary = gallery.run_all(seed=seed, grid=flags.grid, tol=flags.tol, ids=ids)
        if summary.failed:
            verdict = Verdict.FAIL
        elif summary.inconclusive:
            verdict = Verdict.INCONCLUSIVE
        else:
            verdict = Verdict.PASS
        invocation = Invocation(command="gallery run", flags=flags.echo(), seed=seed,
                                grid=list(flags.grid) if flags.grid else None)
        document = ReportDocument(invocation=invocation, kind="gallery", results=gallery_results(summary),
                                  warnings=gallery_warnings(summary), verdict=verdict.value)
    else:
        raise ValueError(f"Неизвестная подкоманда gallery '{sub}'; доступны: list, show, run")
    return _finish(document, flags)


def cmd_report(path: Path, fmt: str = "text", output: Optional[Path] = None) -> Optional[str]:
    """Отрисовка сохранённого ReportDocument в text, md, html или pdf."""
    return render(load_report(path), fmt, output)


def emit(document: ReportDocument, flags: Flags) -> int:
    """
    Вывод отчёта: JSON в файл по --json, таблица в stdout.

    Returns:
        int: Код возврата: 1 при отказе вердикта, иначе 0
    """
    if flags.json is not None:
        Path(flags.json).write_text(dumps(document), encoding="utf-8")
        logger.info(f"Отчёт записан: {flags.json}")
    if document.kind == "case":
        print(json.dumps(document.results, ensure_ascii=False, indent=2))
    else:
        print(render(document, "text"))
    return EXIT_FAILED if document.verdict == Verdict.FAIL.value else EXIT_OK


def execute(command: str, args: Dict[str, Any], flags: Flags) -> int:
    """
    Выполнение команды с отображением ошибок в коды возврата.

    Args:
        command: tv, diagnose, gallery или report
        args: Позиционные аргументы команды
        flags: Флаги

    Returns:
        int: 0 при успехе, 1 при отказе вердикта, 2 при ошибке входных данных
    """
    try:
        if command == "tv":
            return emit(cmd_tv(args["file_a"], args["file_b"], flags), flags)
        if command == "diagnose":
            return emit(cmd_diagnose(args["spec"], flags), flags)
        if command == "gallery":
            return emit(cmd_gallery(args["sub"], args.get("case_id"), flags), flags)
        if command == "report":
            text = cmd_report(args["path"], args.get("format", "text"), args.get("output"))
            if text is not None and args.get("output") is None:
                print(text)
            return EXIT_OK
        raise ValueError(f"Неизвестная команда '{command}'")
    except (MeasureModesError, ValidationError, json.JSONDecodeError, ValueError, OSError) as e:
        logger.error(f"Ошибка входных данных: {e}", exc_info=logger.isEnabledFor(logging.DEBUG))
        print(f"Ошибка: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
