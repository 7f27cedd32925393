"""
Галерея примеров: эталонные случаи с ожиданиями и их проверка.

Каждый случай хранится в JSON-файле каталога галереи. Ожидание ссылается
на одну пробу (операцию других модулей), её аргументы, ожидаемое
значение и происхождение: PAPER, TRIVIAL или DERIVED. Опубликованные
значения, расходящиеся с независимым вычислением, помечаются disputed и
при несовпадении дают статус paper-discrepancy, а не ошибку.
"""
import json
import logging
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from config import get_config
from core.measure import SignedMeasure
from core.numbers import INF, Number, close, format_number
from core.space import NatSet, Space
from core.testfn import random_family
from schemas.literals import parse_function, parse_number, parse_set
from schemas.measures import MeasureSpec, SequenceSpec, load_measure, parse_space
from services.convergence import (
    ConvergenceReport,
    Probing,
    check_F,
    check_S,
    check_truncation_blowup,
    continuity_set,
    diagnose,
)
from services.distance import TVReport, sup_estimate, tv
from services.integrate import integrate
from services.probes import LimitVerdict, probe_limit, random_natural_sets
from services.sequences import MeasureSequence
from utils.enums import EstimatorClass, ExpectationStatus, FunctionClass, LimitKind, Mode, Provenance, Verdict
from utils.exceptions import DivergentIntegralError, ParseError, UnknownCaseError

logger = logging.getLogger(__name__)

CASE_IDS = (
    "exm1_counting_tails",
    "exm2_escaping_mass",
    "exm3_oscillating_block",
    "exm4_attainability",
    "thm5_cofinite",
    "pro3_truncation",
)


class ExpectationSpec(BaseModel):
    """Ожидание: проба, аргументы, значение, происхождение."""
    probe: str
    args: Dict[str, Any] = Field(default_factory=dict)
    expected: Union[str, int, float, bool]
    provenance: Provenance
    note: str = ""
    disputed: bool = False


class PairSpec(BaseModel):
    """Пара мер: имена файлов каталога галереи или описания."""
    mu: Union[str, MeasureSpec]
    nu: Union[str, MeasureSpec]


class CaseSpec(BaseModel):
    """JSON-описание случая галереи."""
    id: str
    title: str
    space: str
    sequence: Optional[SequenceSpec] = None
    pair: Optional[PairSpec] = None
    expectations: List[ExpectationSpec]
    discrepancy_note: Optional[str] = None


@dataclass(frozen=True)
class GalleryCase:
    """
    Собранный случай галереи.

    Attributes:
        id: Идентификатор
        title: Краткое описание
        space: Пространство
        sequence: Последовательность (для случаев сходимости)
        pair: Пара мер (для случаев расстояния)
        expectations: Ожидания
        discrepancy_note: Пояснение расхождения опубликованных и вычисленных значений
        spec: Исходное описание для сериализации
    """

    id: str
    title: str
    space: Space
    sequence: Optional[MeasureSequence]
    pair: Optional[Tuple[SignedMeasure, SignedMeasure]]
    expectations: Tuple[ExpectationSpec, ...]
    discrepancy_note: Optional[str]
    spec: CaseSpec


@dataclass(frozen=True)
class ExpectationResult:
    """Итог проверки одного ожидания."""

    case: str
    probe: str
    args: Dict[str, Any]
    expected: str
    actual: str
    provenance: Provenance
    status: ExpectationStatus
    note: str = ""


@dataclass
class GallerySummary:
    """Сводка прогона галереи."""

    seed: int
    grid: Optional[Tuple[int, ...]]
    results: List[ExpectationResult] = field(default_factory=list)
    discrepancies: Dict[str, str] = field(default_factory=dict)

    def count(self, status: ExpectationStatus) -> int:
        return sum(1 for r in self.results if r.status == status)

    @property
    def failed(self) -> bool:
        return self.count(ExpectationStatus.FAIL) > 0

    @property
    def inconclusive(self) -> bool:
        return self.count(ExpectationStatus.INCONCLUSIVE) > 0


# Загрузка случаев


def data_dir() -> Path:
    return Path(get_config().DATA)


def list_cases() -> List[str]:
    return list(CASE_IDS)


def load_spec(case_id: str) -> CaseSpec:
    """
    Описание случая из каталога галереи.

    Raises:
        UnknownCaseError: Неизвестный идентификатор или нет файла
        ParseError: Файл не соответствует формату
    """
    if case_id not in CASE_IDS:
        raise UnknownCaseError(f"Неизвестный случай '{case_id}'; доступны: {', '.join(CASE_IDS)}")
    path = data_dir() / f"{case_id}.json"
    if not path.exists():
        raise UnknownCaseError(f"Файл случая {path} не найден")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"Некорректный JSON: {exc.msg}", f"{path}:{exc.lineno}:{exc.colno}") from exc
    try:
        return CaseSpec.model_validate(data)
    except ValidationError as exc:
        error = exc.errors()[0]
        raise ParseError(error["msg"], f"{path}:{'.'.join(str(p) for p in error['loc'])}") from exc


def _measure(value: Union[str, MeasureSpec], space: Space) -> SignedMeasure:
    if isinstance(value, str):
        return load_measure(data_dir() / value)
    return value.build(space)


def build_case(spec: CaseSpec) -> GalleryCase:
    space = parse_space(spec.space)
    sequence = spec.sequence.build() if spec.sequence is not None else None
    pair = None
    if spec.pair is not None:
        pair = (_measure(spec.pair.mu, space), _measure(spec.pair.nu, space))
    return GalleryCase(spec.id, spec.title, space, sequence, pair, tuple(spec.expectations),
                       spec.discrepancy_note, spec)


def case(case_id: str) -> GalleryCase:
    """
    Полностью собранный случай галереи.

    Args:
        case_id: Идентификатор из CASE_IDS

    Returns:
        GalleryCase: Случай с ожиданиями

    Raises:
        UnknownCaseError: Неизвестный идентификатор
    """
    return build_case(load_spec(case_id))


def case_to_dict(item: GalleryCase) -> Dict[str, Any]:
    return item.spec.model_dump(mode="json", exclude_none=True)


# Пробы


class CaseRun:
    """Кэш вычислений для одного случая при заданных зерне, сетке и точности."""

    def __init__(self, item: GalleryCase, seed: int, grid: Optional[Tuple[int, ...]], tol: float):
        self.case = item
        self.seed = seed
        self.tol = tol
        self.sequence = item.sequence.with_grid(grid) if item.sequence is not None and grid else item.sequence

    @cached_property
    def probing(self) -> Probing:
        return Probing(self.sequence, self.tol, self.seed)

    @cached_property
    def report(self) -> ConvergenceReport:
        return diagnose(self.sequence, seed=self.seed, tol=self.tol)

    @cached_property
    def tv(self) -> TVReport:
        mu, nu = self.case.pair
        return tv(mu, nu)

    def set(self, text: str):
        return parse_set(text, self.case.space)

    def function(self, text: str):
        return parse_function(text, self.case.space)


def _limit_of(trace) -> LimitVerdict:
    return probe_limit(trace)


def _probe_mode(run: CaseRun, args) -> Verdict:
    return run.report.modes[Mode(args["mode"])].verdict


def _probe_vague_c0(run: CaseRun, args) -> Verdict:
    return run.report.vague_c0.verdict


def _probe_condition(run: CaseRun, args) -> Verdict:
    return run.report.conditions[args["key"]].verdict


def _probe_vague_battery(run: CaseRun, args) -> Verdict:
    verdicts = [v.verdict for key, v in run.report.conditions.items() if key.startswith("vague.")]
    if Verdict.FAIL in verdicts:
        return Verdict.FAIL
    if not verdicts or Verdict.INCONCLUSIVE in verdicts:
        return Verdict.INCONCLUSIVE
    return Verdict.PASS


def _probe_mass(run: CaseRun, args) -> Number:
    subset = run.set(args["set"])
    if "n" in args:
        return run.sequence.rule(int(args["n"])).mass(subset)
    if run.sequence is not None:
        return run.sequence.limit.mass(subset)
    mu, nu = run.case.pair
    return (mu if args.get("measure") == "mu" else nu).mass(subset)


def _probe_limit_mass(run: CaseRun, args) -> LimitVerdict:
    _, trace, _ = run.probing.set_trace(run.set(args["set"]))
    return _limit_of(trace)


def _probe_integral(run: CaseRun, args) -> Number:
    return integrate(run.function(args["function"]), run.sequence.limit).value


def _probe_limit_integral(run: CaseRun, args) -> LimitVerdict:
    _, trace, _ = run.probing.function_trace(run.function(args["function"]))
    return _limit_of(trace)


def _probe_exceeds(run: CaseRun, args) -> Optional[bool]:
    """Все частичные пределы ∫f dν_n строго больше ∫f dν."""
    _, trace, target = run.probing.function_trace(run.function(args["function"]))
    verdict = _limit_of(trace)
    limits = verdict.limits if verdict.kind == LimitKind.OSCILLATES else (
        (verdict.value,) if verdict.kind == LimitKind.CONVERGES else ())
    if not limits:
        return None
    return all(float(v) > float(target) + run.tol for v in limits)


def _family(run: CaseRun, args):
    if "functions" in args:
        return [run.function(text) for text in args["functions"]]
    return random_family(run.case.space, FunctionClass(args["family"]), seed=run.seed + int(args.get("offset", 0)),
                         count=int(args.get("count", 10)), nonnegative=bool(args.get("nonnegative", False)))


def _probe_check_F(run: CaseRun, args) -> Verdict:
    return check_F(run.sequence, _family(run, args), probing=run.probing).verdict


def _generated_sets(run: CaseRun, kind: str, point: int) -> List[NatSet]:
    """Конечные множества без точки (замкнутые) или их дополнения (открытые)."""
    rng = np.random.default_rng(run.seed)
    finite = [s for s in random_natural_sets(run.case.space, rng, 20) if s.is_finite and not s.contains(point)]
    if kind == "closed_avoiding":
        return finite
    if kind == "open_containing":
        return [s.complement() for s in finite]
    raise ParseError(f"Неизвестный генератор множеств '{kind}'", "args.generated")


def _probe_check_S(run: CaseRun, args) -> Verdict:
    if "generated" in args:
        sets = _generated_sets(run, args["generated"], int(args.get("point", 1)))
    else:
        sets = [run.set(text) for text in args["sets"]]
    return check_S(run.sequence, sets, probing=run.probing).verdict


def _probe_bounded_stabilize(run: CaseRun, args) -> bool:
    """ν_n(A) = ν(A) точно для ограниченных множеств библиотеки, как только n > sup A."""
    seq = run.sequence
    for subset in run.probing.sets(bounded=True):
        if subset.is_empty:
            continue
        target = seq.limit.mass(subset)
        for n, m in seq.measures:
            if n > subset.supremum() and not close(m.mass(subset), target, run.tol):
                return False
    return True


def _probe_sup_sets(run: CaseRun, args) -> Number:
    return run.tv.sup_sets


def _probe_jordan(run: CaseRun, args) -> Number:
    return run.tv.jordan_norm


def _probe_paper_tv(run: CaseRun, args) -> Number:
    return run.tv.paper_tv


def _probe_attainability(run: CaseRun, args) -> str:
    return run.tv.attainability.summary()


def _probe_borel_witness(run: CaseRun, args) -> str:
    return str(run.tv.attainability.borel_witness)


def _probe_gap_shrinks(run: CaseRun, args) -> bool:
    """Зазор оценки класса положителен на каждом ε и убывает при ε → 0."""
    mu, nu = run.case.pair
    estimate = sup_estimate(mu, nu, EstimatorClass(args["estimator"]), decomposition=run.tv.hahn)
    gaps = [estimate.bound - value for _, value in estimate.ladder]
    return all(g > 0 for g in gaps) and all(a > b for a, b in zip(gaps, gaps[1:]))


def _probe_search_limit(run: CaseRun, args) -> Number:
    """Экстраполированный результат поиска по классу при ε → 0."""
    mu, nu = run.case.pair
    return sup_estimate(mu, nu, EstimatorClass(args["estimator"]), decomposition=run.tv.hahn).value


def _probe_continuity_set(run: CaseRun, args) -> bool:
    nu = run.case.pair[1] if run.case.pair is not None else run.sequence.limit
    return continuity_set(nu, run.set(args["set"]))


def _probe_truncation(run: CaseRun, args) -> Verdict:
    thresholds = [parse_number(t) for t in args.get("thresholds", [10, 100, 1000])]
    return check_truncation_blowup(run.sequence, run.function(args["function"]), thresholds).verdict


def _probe_total_mass(run: CaseRun, args) -> Number:
    return run.sequence.rule(int(args["n"])).total_mass()


PROBES: Dict[str, Tuple[str, Callable[[CaseRun, Dict[str, Any]], Any]]] = {
    "mode": ("verdict", _probe_mode),
    "vague_c0": ("verdict", _probe_vague_c0),
    "condition": ("verdict", _probe_condition),
    "vague_battery": ("verdict", _probe_vague_battery),
    "check_F": ("verdict", _probe_check_F),
    "check_S": ("verdict", _probe_check_S),
    "truncation_blowup": ("verdict", _probe_truncation),
    "mass": ("number", _probe_mass),
    "integral": ("number", _probe_integral),
    "total_mass": ("number", _probe_total_mass),
    "sup_sets": ("number", _probe_sup_sets),
    "jordan_norm": ("number", _probe_jordan),
    "paper_tv": ("number", _probe_paper_tv),
    "limit_mass": ("limit", _probe_limit_mass),
    "limit_integral": ("limit", _probe_limit_integral),
    "exceeds": ("bool", _probe_exceeds),
    "bounded_sets_stabilize": ("bool", _probe_bounded_stabilize),
    "gap_shrinks": ("bool", _probe_gap_shrinks),
    "search_limit": ("number", _probe_search_limit),
    "continuity_set": ("bool", _probe_continuity_set),
    "attainability": ("text", _probe_attainability),
    "borel_witness": ("text", _probe_borel_witness),
}

_LIMIT = re.compile(r"^(converges|oscillates|diverges|inconclusive)(?:\((.*)\))?$")


def parse_limit(text: str) -> Tuple[LimitKind, Tuple[Number, ...]]:
    """Разбор записи "converges(4/3)", "oscillates({2, 3})", "diverges(+inf)"."""
    match = _LIMIT.match(text.strip())
    if not match:
        raise ParseError(f"Ожидалась запись предела: '{text}'", "expected")
    kind = LimitKind(match.group(1))
    body = (match.group(2) or "").strip().strip("{}")
    values = tuple(parse_number(v.strip().lstrip("+")) for v in body.split(",") if v.strip())
    return kind, values


def _render(kind: str, actual: Any) -> str:
    if actual is None:
        return "inconclusive"
    if kind == "verdict":
        return actual.value
    if kind == "number":
        return format_number(actual)
    if kind == "limit":
        return actual.describe()
    if kind == "bool":
        return "true" if actual else "false"
    return str(actual)


def _is_inconclusive(kind: str, actual: Any) -> bool:
    if actual is None:
        return True
    if kind == "verdict":
        return actual == Verdict.INCONCLUSIVE
    if kind == "limit":
        return actual.kind == LimitKind.INCONCLUSIVE
    return False


def _matches(kind: str, expected: Any, actual: Any, tol: float) -> bool:
    if kind == "verdict":
        return Verdict(str(expected)) == actual
    if kind == "number":
        return close(parse_number(expected), actual, tol)
    if kind == "bool":
        wanted = expected if isinstance(expected, bool) else str(expected).lower() == "true"
        return wanted == actual
    if kind == "limit":
        wanted_kind, values = parse_limit(str(expected))
        if wanted_kind != actual.kind:
            return False
        if actual.kind == LimitKind.CONVERGES:
            observed: Tuple[Number, ...] = (actual.value,)
        elif actual.kind == LimitKind.OSCILLATES:
            observed = actual.limits
        elif actual.kind == LimitKind.DIVERGES:
            observed = (actual.direction * INF,)
        else:
            observed = ()
        if len(values) != len(observed):
            return False
        return all(close(w, o, tol) for w, o in zip(sorted(values, key=float), sorted(observed, key=float)))
    return str(expected) == str(actual)


def check_expectation(run: CaseRun, expectation: ExpectationSpec) -> ExpectationResult:
    """Вычисление пробы и сравнение с ожидаемым значением."""
    if expectation.probe not in PROBES:
        raise ParseError(f"Неизвестная проба '{expectation.probe}'", f"{run.case.id}.expectations")
    kind, probe = PROBES[expectation.probe]
    try:
        actual = probe(run, expectation.args)
    except DivergentIntegralError as exc:
        if kind != "number":
            raise
        actual = exc.direction * INF
        logger.debug(f"{run.case.id}: {expectation.probe} {expectation.args} расходится, значение {actual}")
    # экстраполированные пределы сравниваются грубее точных чисел
    tol = 10 * run.tol if kind == "limit" else get_config().QUADRATURE_TOLERANCE
    if _is_inconclusive(kind, actual):
        status = ExpectationStatus.INCONCLUSIVE
    elif _matches(kind, expectation.expected, actual, tol):
        status = ExpectationStatus.PASS
    elif expectation.disputed and expectation.provenance == Provenance.PAPER:
        status = ExpectationStatus.PAPER_DISCREPANCY
    else:
        status = ExpectationStatus.FAIL
    result = ExpectationResult(run.case.id, expectation.probe, dict(expectation.args), str(expectation.expected),
                               _render(kind, actual), expectation.provenance, status, expectation.note)
    if status == ExpectationStatus.FAIL:
        logger.warning(f"{run.case.id}: {expectation.probe} {expectation.args} = {result.actual}, "
                       f"ожидалось {result.expected}")
    elif status == ExpectationStatus.PAPER_DISCREPANCY:
        logger.warning(f"{run.case.id}: опубликованное значение {result.expected} расходится с {result.actual}")
    return result


def run_case(item: GalleryCase, seed: Optional[int] = None, grid: Optional[Tuple[int, ...]] = None,
             tol: Optional[float] = None) -> List[ExpectationResult]:
    config = get_config()
    run = CaseRun(item, config.SEED if seed is None else seed, grid, config.TOLERANCE if tol is None else tol)
    logger.info(f"Случай {item.id}: {len(item.expectations)} ожиданий")
    return [check_expectation(run, expectation) for expectation in item.expectations]


def run_all(seed: Optional[int] = None, grid: Optional[Tuple[int, ...]] = None,
            tol: Optional[float] = None, ids: Optional[List[str]] = None) -> GallerySummary:
    """
    Прогон всех случаев галереи.

    Args:
        seed: Зерно случайных семейств
        grid: Сетка n вместо сеток случаев
        tol: Точность пределов
        ids: Подмножество случаев

    Returns:
        GallerySummary: Итоги по всем ожиданиям; детерминирован при одинаковых входах
    """
    seed = get_config().SEED if seed is None else seed
    summary = GallerySummary(seed, tuple(grid) if grid else None)
    for case_id in ids or CASE_IDS:
        item = case(case_id)
        summary.results.extend(run_case(item, seed, grid, tol))
        if item.discrepancy_note:
            summary.discrepancies[item.id] = item.discrepancy_note
    logger.info(f"Галерея: pass {summary.count(ExpectationStatus.PASS)}, fail {summary.count(ExpectationStatus.FAIL)}, "
                f"paper-discrepancy {summary.count(ExpectationStatus.PAPER_DISCREPANCY)}, "
                f"inconclusive {summary.count(ExpectationStatus.INCONCLUSIVE)}")
    return summary
