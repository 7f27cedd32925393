"""
Диагностика сходимости последовательностей мер.

Четыре режима (vague, weak, setwise, tv) проверяются на конечной сетке n.
Вердикт pass означает «нарушений не найдено и экстраполяция устойчива»;
это не доказательство сходимости.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from config import get_config
from core.measure import SignedMeasure
from core.numbers import INF, Number, format_number
from core.space import BorelSet, RealSet
from core.testfn import (
    TestFunction,
    bump_over_closed,
    bump_under_open,
    constant,
    indicator,
    random_family,
    sampling_window,
)
from services.distance import hahn
from services.integrate import integrate, integrate_truncated
from services.probes import (
    MIN_POINTS,
    LimitVerdict,
    ProbeSet,
    Trace,
    compare,
    lower_limit,
    neighbourhoods,
    probe_limit,
    random_natural_sets,
    random_real_sets,
    unique,
    upper_limit,
)
from services.sequences import MeasureSequence
from utils.enums import FunctionClass, LimitKind, Mode, SetwiseCondition, SpaceKind, VagueCondition, Verdict
from utils.exceptions import (
    DegenerateInputError,
    DivergentIntegralError,
    MeasureModesError,
    PreconditionError,
)

logger = logging.getLogger(__name__)

CAVEAT = ("Вердикты получены на конечной сетке n: pass означает, что нарушений не найдено "
          "и экстраполяция устойчива, а не доказательство сходимости.")

# n для сглаживающих функций над структурными множествами
BUMP_SHARPNESS = 128
RANDOM_SETS = 20
FAMILY_SIZE = 10
TRUNCATION_LADDER = tuple(10 ** k for k in range(1, 9))


@dataclass(frozen=True)
class ConditionVerdict:
    """
    Вердикт одного условия.

    Attributes:
        verdict: pass, fail или inconclusive
        witness: Множество или функция, на которой найдено нарушение
        detail: Пояснение (характер предела, значения)
        traces: Идентификаторы трасс, использованных в проверке
    """

    verdict: Verdict
    witness: Optional[str] = None
    detail: str = ""
    traces: Tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASS

    @property
    def failed(self) -> bool:
        return self.verdict == Verdict.FAIL


@dataclass
class ConvergenceReport:
    """
    Отчёт о сходимости последовательности.

    Attributes:
        sequence: Имя последовательности
        space: Пространство
        grid: Сетка n
        seed: Зерно случайных пробных семейств
        tolerance: Точность пределов
        modes: Вердикты по режимам
        vague_c0: Вердикт для семейства C₀
        conditions: Вердикты условий с ключами vague.<условие> и setwise.<условие>
        traces: Трассы (n, значение) по идентификаторам
        warnings: Нарушения иерархии, расхождения условий, неопределённые вердикты
        caveat: Оговорка о конечной сетке
    """

    sequence: str
    space: str
    grid: Tuple[int, ...]
    seed: int
    tolerance: float
    modes: Dict[Mode, ConditionVerdict] = field(default_factory=dict)
    vague_c0: Optional[ConditionVerdict] = None
    conditions: Dict[str, ConditionVerdict] = field(default_factory=dict)
    traces: Dict[str, Trace] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)
    caveat: str = CAVEAT

    @property
    def failed(self) -> bool:
        return any(v.failed for v in self.modes.values())


def _safe_mass(m: SignedMeasure, subset: BorelSet) -> Number:
    try:
        return m.mass(subset)
    except DivergentIntegralError as exc:
        return exc.direction * INF


def _safe_integral(f: TestFunction, m: SignedMeasure) -> Number:
    return integrate(f, m).value


def continuity_set(nu: SignedMeasure, subset: BorelSet) -> bool:
    """
    Является ли A множеством непрерывности ν: ν(∂A) = 0 точно.

    Args:
        nu: Мера
        subset: Каноническое множество

    Returns:
        bool: True, если граница A имеет нулевую меру
    """
    boundary = subset.boundary()
    if boundary.is_empty:
        return True
    try:
        return nu.mass(boundary) == 0
    except DivergentIntegralError:
        return False


class Probing:
    """
    Вычисление и кэширование трасс одной последовательности.

    Трасса множества A: (n, ν_n(A)) по сетке; трасса функции f: (n, ∫f dν_n).
    Все трассы складываются в общий словарь для отчёта.
    """

    def __init__(self, seq: MeasureSequence, tol: Optional[float] = None, seed: Optional[int] = None):
        config = get_config()
        self.seq = seq
        self.tol = config.TOLERANCE if tol is None else tol
        self.seed = config.SEED if seed is None else seed
        self.traces: Dict[str, Trace] = {}
        self._library: Optional[List[ProbeSet]] = None
        self._function_keys: Dict[str, str] = {}

    def set_trace(self, subset: BorelSet) -> Tuple[str, Trace, Number]:
        key = f"set:{subset}"
        if key not in self.traces:
            self.traces[key] = [(n, _safe_mass(m, subset)) for n, m in self.seq.measures]
        return key, self.traces[key], _safe_mass(self.seq.limit, subset)

    def function_trace(self, f: TestFunction) -> Tuple[str, Trace, Number]:
        shape = f.describe()
        key = self._function_keys.get(shape)
        if key is None:
            key = f"fn:{f.label}"
            while key in self.traces:
                key += "'"
            self._function_keys[shape] = key
            self.traces[key] = [(n, _safe_integral(f, m)) for n, m in self.seq.measures]
        return key, self.traces[key], _safe_integral(f, self.seq.limit)

    def limit_verdict(self, trace: Trace, target: Number) -> Tuple[Verdict, str]:
        if not math.isfinite(target):
            return Verdict.FAIL, f"предел {format_number(target)} бесконечен"
        verdict: LimitVerdict = probe_limit(trace, self.tol)
        if verdict.kind == LimitKind.INCONCLUSIVE:
            return Verdict.INCONCLUSIVE, verdict.describe()
        if verdict.matches(target, self.tol):
            return Verdict.PASS, verdict.describe()
        return Verdict.FAIL, f"{verdict.describe()} ≠ {format_number(target)}"

    # Библиотека пробных множеств

    @property
    def library(self) -> List[ProbeSet]:
        if self._library is None:
            self._library = self._build_library()
        return self._library

    def _build_library(self) -> List[ProbeSet]:
        seq = self.seq
        space = seq.space
        rng = np.random.default_rng(self.seed)
        n0 = seq.measures[0][1]
        n1 = seq.measures[min(1, len(seq.measures) - 1)][1]
        sets: List[BorelSet] = [space.whole()]
        sets.extend(seq.structural_sets())
        for m in (seq.limit, n0):
            support = m.support()
            sets.append(support)
            if isinstance(support, RealSet):
                sets.extend(RealSet.from_interval(space, c) for c in support.intervals)
        try:
            decomposition = hahn(n0.difference(seq.limit))
            sets.extend([decomposition.positive_set, decomposition.negative_set])
        except MeasureModesError as exc:
            logger.debug(f"Разложение Хана для ν_{seq.grid[0]} - ν пропущено: {exc}")
        atoms = sorted({a.at for m in (seq.limit, n0, n1) for a in m.atoms})
        if space.kind == SpaceKind.REAL_LINE:
            sets.extend(RealSet.build(space, points=[a]) for a in atoms)
            sets.extend(neighbourhoods(space, atoms, Fraction(1, 8)))
            for subset in random_real_sets(space, rng, RANDOM_SETS, sampling_window(space)):
                sets.extend([subset, subset.closure(), subset.interior()])
        else:
            sets.extend(neighbourhoods(space, atoms, Fraction(1)))
            sets.extend(random_natural_sets(space, rng, RANDOM_SETS))
        probes = unique([ProbeSet(str(s), s) for s in sets])
        logger.debug(f"Библиотека пробных множеств {seq.name}: {len(probes)} множеств")
        return probes

    def sets(self, *, open_: Optional[bool] = None, closed: Optional[bool] = None,
             bounded: Optional[bool] = None, compact: Optional[bool] = None) -> List[BorelSet]:
        """Множества библиотеки с заданными топологическими свойствами."""
        result = []
        metric = self.seq.space.is_metric
        for probe in self.library:
            subset = probe.subset
            if open_ is not None and subset.is_open() != open_:
                continue
            if closed is not None and subset.is_closed() != closed:
                continue
            if bounded is not None and (not metric or subset.is_bounded() != bounded):
                continue
            if compact is not None and subset.is_compact() != compact:
                continue
            result.append(subset)
        return result

    def structural_bumps(self) -> List[TestFunction]:
        """Сглаженные индикаторы компактных множеств библиотеки: непрерывные, с компактным носителем."""
        bumps = []
        for subset in self.sets(closed=True, compact=True):
            if subset.is_empty:
                continue
            bumps.append(bump_over_closed(subset, BUMP_SHARPNESS))
        return bumps

    def open_bumps(self) -> List[TestFunction]:
        bumps = []
        for subset in self.sets(open_=True, bounded=True):
            if subset.is_empty:
                continue
            try:
                bump = bump_under_open(subset, BUMP_SHARPNESS)
            except DegenerateInputError:
                continue
            if bump.support_compact:
                bumps.append(bump)
        return bumps


def _aggregate(results: Sequence[ConditionVerdict], empty_detail: str = "нет пробных объектов") -> ConditionVerdict:
    """fail, если есть нарушение; inconclusive, если хотя бы одна проба неопределённа; иначе pass."""
    if not results:
        return ConditionVerdict(Verdict.INCONCLUSIVE, detail=empty_detail)
    keys = tuple(key for r in results for key in r.traces)
    for result in results:
        if result.failed:
            return ConditionVerdict(Verdict.FAIL, result.witness, result.detail, keys)
    for result in results:
        if result.verdict == Verdict.INCONCLUSIVE:
            return ConditionVerdict(Verdict.INCONCLUSIVE, result.witness, result.detail, keys)
    return ConditionVerdict(Verdict.PASS, detail=f"проверено объектов: {len(results)}", traces=keys)


def _function_results(probing: Probing, family: Iterable[TestFunction]) -> List[ConditionVerdict]:
    results = []
    for f in family:
        key, trace, target = probing.function_trace(f)
        verdict, detail = probing.limit_verdict(trace, target)
        results.append(ConditionVerdict(verdict, f.label, f"∫{f.label}: {detail}", (key,)))
    return results


def _set_results(probing: Probing, sets: Iterable[BorelSet]) -> List[ConditionVerdict]:
    results = []
    for subset in sets:
        key, trace, target = probing.set_trace(subset)
        verdict, detail = probing.limit_verdict(trace, target)
        results.append(ConditionVerdict(verdict, str(subset), f"ν_n({subset}): {detail}", (key,)))
    return results


def _one_sided_results(probing: Probing, sets: Iterable[BorelSet], upper: bool,
                       bound=None) -> List[ConditionVerdict]:
    """limsup ν_n(A) ≤ bound(A) (upper) или liminf ν_n(A) ≥ bound(A); по умолчанию bound(A) = ν(A)."""
    results = []
    for subset in sets:
        key, trace, target = probing.set_trace(subset)
        if bound is not None:
            target = bound(subset)
        estimate = upper_limit(trace, probing.tol) if upper else lower_limit(trace, probing.tol)
        verdict = compare(estimate, target, probing.tol, upper)
        sign = "≤" if upper else "≥"
        name = "limsup" if upper else "liminf"
        shown = format_number(estimate) if estimate is not None else "?"
        detail = f"{name} ν_n({subset}) = {shown} {sign} {format_number(target)}"
        results.append(ConditionVerdict(verdict, str(subset), detail, (key,)))
    return results


# Общие проверки


def check_F(seq: MeasureSequence, family: Sequence[TestFunction], tol: Optional[float] = None,
            probing: Optional[Probing] = None) -> ConditionVerdict:
    """
    F-сходимость: ∫f dν_n → ∫f dν для каждой f из семейства.

    Args:
        seq: Последовательность
        family: Непустое семейство функций на пространстве последовательности
        tol: Точность предела
        probing: Общий кэш трасс

    Returns:
        ConditionVerdict: fail со свидетелем f при нарушении или расходимости

    Raises:
        PreconditionError: Семейство пусто
    """
    if not family:
        raise PreconditionError("Семейство функций пусто")
    probing = probing or Probing(seq, tol)
    return _aggregate(_function_results(probing, family))


def check_S(seq: MeasureSequence, sets: Sequence[BorelSet], tol: Optional[float] = None,
            probing: Optional[Probing] = None) -> ConditionVerdict:
    """S-сходимость: ν_n(A) → ν(A) для каждого A."""
    probing = probing or Probing(seq, tol)
    results = _set_results(probing, sets)
    if not results:
        return ConditionVerdict(Verdict.PASS, detail="пустой набор множеств")
    return _aggregate(results)


# Батареи условий


def check_vague_battery(seq: MeasureSequence, seed: Optional[int] = None, tol: Optional[float] = None,
                        probing: Optional[Probing] = None) -> Dict[VagueCondition, ConditionVerdict]:
    """
    Десять эквивалентных (на полных пространствах Гейне-Бореля) условий смутной сходимости.

    Каждое условие проверяется независимо, поэтому сама эквивалентность
    проверяема: расхождение вердиктов попадает в предупреждения отчёта.

    Raises:
        UnsupportedMetricError: Пространство неметризуемо
    """
    seq.space.require_metric("check_vague_battery")
    probing = probing or Probing(seq, tol, seed)
    space, base = seq.space, probing.seed
    bumps = probing.structural_bumps()
    compact = probing.sets(closed=True, compact=True)
    open_bounded = probing.sets(open_=True, bounded=True)
    closed_bounded = probing.sets(closed=True, bounded=True)
    bounded = probing.sets(bounded=True)
    continuity = [s for s in bounded if continuity_set(seq.limit, s)]

    def family(function_class: FunctionClass, offset: int, nonnegative: bool = False) -> List[TestFunction]:
        return random_family(space, function_class, seed=base + offset, count=FAMILY_SIZE, nonnegative=nonnegative)

    def closure_mass(subset: BorelSet) -> Number:
        return _safe_mass(seq.limit, subset.closure())

    def interior_mass(subset: BorelSet) -> Number:
        return _safe_mass(seq.limit, subset.interior())

    null_steps = [f for f in family(FunctionClass.M_GAMMA, 5)
                  if f.support_bounded and all(seq.limit.atom_mass(b) == 0 for b in f.breakpoints())]
    bounded_support = [bump_over_closed(s, BUMP_SHARPNESS) for s in closed_bounded if not s.is_empty]

    battery = {
        VagueCondition.CC_FUNCTIONS: _function_results(probing, family(FunctionClass.CC, 0) + bumps),
        VagueCondition.COMPACT_AND_OPEN_SETS: (_one_sided_results(probing, compact, upper=True)
                                               + _one_sided_results(probing, open_bounded, upper=False)),
        VagueCondition.CLOSED_AND_OPEN_BOUNDED_SETS: (_one_sided_results(probing, closed_bounded, upper=True)
                                                      + _one_sided_results(probing, open_bounded, upper=False)),
        VagueCondition.SANDWICH: (_one_sided_results(probing, bounded, upper=True, bound=closure_mass)
                                  + _one_sided_results(probing, bounded, upper=False, bound=interior_mass)),
        VagueCondition.CONTINUITY_SETS: _set_results(probing, continuity),
        VagueCondition.BOUNDED_SUPPORT_CONTINUOUS: _function_results(
            probing, family(FunctionClass.CC, 1) + bounded_support),
        VagueCondition.HOLDER_CC: _function_results(probing, family(FunctionClass.HOLDER, 2) + bumps),
        VagueCondition.UNIFORMLY_CONTINUOUS_CC: _function_results(
            probing, family(FunctionClass.CC, 3) + probing.open_bumps()),
        VagueCondition.NULL_DISCONTINUITY_MB: _function_results(
            probing, null_steps + [indicator(s) for s in continuity]),
        VagueCondition.NONNEGATIVE_CC: _function_results(
            probing, family(FunctionClass.CC, 4, nonnegative=True) + bumps),
    }
    verdicts = {condition: _aggregate(results) for condition, results in battery.items()}
    for condition, verdict in verdicts.items():
        logger.debug(f"{seq.name}: vague.{condition.value} = {verdict.verdict.value} {verdict.detail}")
    return verdicts


def check_setwise_battery(seq: MeasureSequence, seed: Optional[int] = None, tol: Optional[float] = None,
                          probing: Optional[Probing] = None) -> Dict[SetwiseCondition, ConditionVerdict]:
    """
    Условия сходимости на множествах: все, открытые, замкнутые и их ограниченные варианты.

    На метризуемых пространствах первые три условия равносильны; на
    коконечной топологии их согласие не утверждается.
    """
    probing = probing or Probing(seq, tol, seed)
    everything = [p.subset for p in probing.library]
    verdicts = {
        SetwiseCondition.ALL_SETS: _aggregate(_set_results(probing, everything)),
        SetwiseCondition.OPEN_SETS: _aggregate(_set_results(probing, probing.sets(open_=True))),
        SetwiseCondition.CLOSED_SETS: _aggregate(_set_results(probing, probing.sets(closed=True))),
    }
    if seq.space.is_metric:
        verdicts[SetwiseCondition.OPEN_BOUNDED_SETS] = _aggregate(
            _set_results(probing, probing.sets(open_=True, bounded=True)))
        verdicts[SetwiseCondition.CLOSED_BOUNDED_SETS] = _aggregate(
            _set_results(probing, probing.sets(closed=True, bounded=True)))
    return verdicts


def check_weak(seq: MeasureSequence, seed: Optional[int] = None, tol: Optional[float] = None,
               probing: Optional[Probing] = None) -> ConditionVerdict:
    """Слабая сходимость: ограниченные непрерывные функции и константа 1."""
    probing = probing or Probing(seq, tol, seed)
    family = [constant(seq.space, 1, "1")] + random_family(seq.space, FunctionClass.CB, seed=probing.seed + 6,
                                                           count=FAMILY_SIZE)
    return check_F(seq, family, probing=probing)


def _sup_sets(nu_n: SignedMeasure, nu: SignedMeasure) -> Number:
    try:
        return hahn(nu_n.difference(nu)).sup_sets
    except DivergentIntegralError:
        return INF


def check_tv(seq: MeasureSequence, tol: Optional[float] = None,
             probing: Optional[Probing] = None) -> ConditionVerdict:
    """
    Сходимость по полной вариации: sup_A |ν_n(A) - ν(A)| → 0.

    Returns:
        ConditionVerdict: fail при расходимости или ненулевом пределе
    """
    probing = probing or Probing(seq, tol)
    key = "tv:sup_sets"
    trace = [(n, _sup_sets(m, seq.limit)) for n, m in seq.measures]
    probing.traces[key] = trace
    verdict, detail = probing.limit_verdict(trace, Fraction(0))
    return ConditionVerdict(verdict, None if verdict != Verdict.FAIL else "sup_sets", f"sup_sets: {detail}", (key,))


def check_truncation_blowup(seq: MeasureSequence, f: TestFunction,
                            thresholds: Sequence[Number] = (10, 100, 1000)) -> ConditionVerdict:
    """
    Рост интегралов усечений при ∫f dν = ∞.

    Для каждого порога M ищется уровень усечения k и номер N, такие что
    ∫ 1_{f<k}·f dν_n > M для всех n сетки, начиная с N.

    Args:
        seq: Последовательность, сходящаяся на множествах
        f: Неотрицательная функция
        thresholds: Пороги M

    Returns:
        ConditionVerdict: pass, если все пороги превзойдены

    Raises:
        PreconditionError: ∫f dν конечен
    """
    if not integrate(f, seq.limit).is_divergent:
        raise PreconditionError(f"∫{f.label} dν конечен: рост усечений не ожидается")
    details = []
    for threshold in thresholds:
        if threshold <= 0:
            details.append(f"M = {format_number(threshold)}: тривиально")
            continue
        found = None
        for k in TRUNCATION_LADDER:
            values = [integrate_truncated(f, m, k) for _, m in seq.measures]
            if values[-1] > threshold:
                start = len(values) - 1
                while start > 0 and values[start - 1] > threshold:
                    start -= 1
                found = (k, seq.grid[start])
                break
        if found is None:
            verdict = Verdict.INCONCLUSIVE if len(seq.grid) < MIN_POINTS else Verdict.FAIL
            return ConditionVerdict(verdict, f.label, f"M = {format_number(threshold)} не превзойдён")
        details.append(f"M = {format_number(threshold)}: k = {found[0]}, N = {found[1]}")
    return ConditionVerdict(Verdict.PASS, detail="; ".join(details))


# Сводная диагностика

_HIERARCHY = ((Mode.TV, Mode.SETWISE), (Mode.SETWISE, Mode.WEAK), (Mode.WEAK, Mode.VAGUE))


def diagnose(seq: MeasureSequence, modes: Optional[Iterable[Mode]] = None, seed: Optional[int] = None,
             tol: Optional[float] = None) -> ConvergenceReport:
    """
    Полная диагностика последовательности.

    Args:
        seq: Последовательность
        modes: Проверяемые режимы (по умолчанию все четыре)
        seed: Зерно случайных семейств
        tol: Точность пределов

    Returns:
        ConvergenceReport: Вердикты режимов и условий, трассы и предупреждения
    """
    probing = Probing(seq, tol, seed)
    modes = list(modes) if modes is not None else list(Mode)
    report = ConvergenceReport(seq.name, str(seq.space), seq.grid, probing.seed, probing.tol)
    logger.info(f"Диагностика {seq.name} на {seq.space}, сетка {seq.grid[0]}..{seq.grid[-1]}")
    if len(seq.grid) < 6:
        report.warnings.append(f"Сетка из {len(seq.grid)} точек слишком коротка: пределы неопределённы")

    if Mode.VAGUE in modes:
        if seq.space.is_metric:
            battery = check_vague_battery(seq, probing=probing)
            report.conditions.update({f"vague.{c.value}": v for c, v in battery.items()})
            report.modes[Mode.VAGUE] = battery[VagueCondition.CC_FUNCTIONS]
            outcomes = {v.verdict for v in battery.values()} - {Verdict.INCONCLUSIVE}
            if len(outcomes) > 1:
                failing = ", ".join(c.value for c, v in battery.items() if v.failed)
                qualifier = "" if seq.space.is_heine_borel else " (пространство не Гейне-Бореля)"
                report.warnings.append(f"Условия смутной сходимости разошлись{qualifier}: fail у {failing}")
        else:
            report.modes[Mode.VAGUE] = ConditionVerdict(Verdict.INCONCLUSIVE,
                                                        detail=f"{seq.space} неметризуемо")
            report.warnings.append(f"Батарея смутной сходимости требует метрики, а {seq.space} неметризуемо")
        report.vague_c0 = check_F(seq, random_family(seq.space, FunctionClass.C0, seed=probing.seed + 7,
                                                     count=FAMILY_SIZE), probing=probing)

    if Mode.WEAK in modes:
        report.modes[Mode.WEAK] = check_weak(seq, probing=probing)

    if Mode.SETWISE in modes:
        battery = check_setwise_battery(seq, probing=probing)
        report.conditions.update({f"setwise.{c.value}": v for c, v in battery.items()})
        report.modes[Mode.SETWISE] = battery[SetwiseCondition.ALL_SETS]
        main = [battery[c].verdict for c in (SetwiseCondition.ALL_SETS, SetwiseCondition.OPEN_SETS,
                                             SetwiseCondition.CLOSED_SETS)]
        if len(set(main) - {Verdict.INCONCLUSIVE}) > 1:
            if seq.space.is_metric:
                report.warnings.append("Условия сходимости на всех, открытых и замкнутых множествах разошлись")
            else:
                report.warnings.append(f"На неметризуемом {seq.space} условия на открытых и замкнутых "
                                       "множествах не равносильны сходимости на всех множествах")

    if Mode.TV in modes:
        report.modes[Mode.TV] = check_tv(seq, probing=probing)

    for stronger, weaker in _HIERARCHY:
        if stronger in report.modes and weaker in report.modes:
            if report.modes[stronger].passed and report.modes[weaker].failed:
                report.warnings.append(f"Нарушена иерархия: {stronger.value} = pass, а {weaker.value} = fail")
    for mode, verdict in report.modes.items():
        if verdict.verdict == Verdict.INCONCLUSIVE:
            report.warnings.append(f"Режим {mode.value}: вердикт не определён ({verdict.detail})")

    report.traces = dict(probing.traces)
    for warning in report.warnings:
        logger.warning(f"{seq.name}: {warning}")
    return report
