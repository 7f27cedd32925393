"""
Расстояние полной вариации.

Разложение Хана знаковой меры строится точно по точкам излома плотности,
атомам и корням суммарной плотности. Оценки супремума по классам множеств
и функций сравниваются с оптимумом Хана: семейство кандидатов зависит от
ε и при ε → 0 подходит к оптимуму, а зазор на конечных ε показывает,
достигается ли супремум в данном классе.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from config import get_config
from core.measure import SignedMeasure
from core.numbers import INF, Number, close, format_number, sign
from core.poly import Poly, sample_point
from core.space import BorelSet, Interval, NatSet, RealSet, Space
from core.testfn import TestFunction, bump_over_closed, indicator, linear_combination
from services.integrate import integrate
from services.probes import aitken
from utils.enums import EstimatorClass, SpaceKind
from utils.exceptions import SpaceMismatchError

logger = logging.getLogger(__name__)

# Предел сканирования знака веса на ℕ при смеси оснований r^n
SIGN_SCAN_LIMIT = 10_000


@dataclass(frozen=True)
class HahnDecomposition:
    """
    Разложение пространства на положительное и отрицательное множества.

    Attributes:
        positive_set: P, на подмножествах которого мера неотрицательна
        negative_set: N = X \\ P
        positive_mass: d(P) ≥ 0
        negative_mass: -d(N) ≥ 0
        positive_core: Части P со строго положительной плотностью и положительные атомы
        negative_core: То же для N
        null_set: Остаток, на котором мера нулевая
    """

    positive_set: BorelSet
    negative_set: BorelSet
    positive_mass: Number
    negative_mass: Number
    positive_core: BorelSet
    negative_core: BorelSet
    null_set: BorelSet

    @property
    def jordan_norm(self) -> Number:
        return self.positive_mass + self.negative_mass

    @property
    def sup_sets(self) -> Number:
        return max(self.positive_mass, self.negative_mass)

    def dominant(self) -> List[Tuple[BorelSet, BorelSet, BorelSet]]:
        """Стороны (множество, ядро, противоположное ядро), на которых достигается sup_sets."""
        sides = []
        if self.positive_mass >= self.negative_mass:
            sides.append((self.positive_set, self.positive_core, self.negative_core))
        if self.negative_mass >= self.positive_mass:
            sides.append((self.negative_set, self.negative_core, self.positive_core))
        return sides


@dataclass(frozen=True)
class SupEstimate:
    """
    Оценка супремума по классу.

    Attributes:
        estimator: Класс множеств или функций
        value: Результат поиска: предел кандидатов при ε → 0, экстраполированный
            по лестнице (Эйткен), или значение на наименьшем ε
        bound: Оптимум Хана: sup_sets для множеств, γ·jordan_norm для функций
        best_finite: Лучшее значение на конечных ε
        gap: bound - best_finite; положителен, если супремум в классе не достигается
        ladder: Пары (ε, значение) по лестнице ε
        gamma: Граница γ для классов функций
    """

    estimator: EstimatorClass
    value: Number
    bound: Number
    best_finite: Number
    gap: Number
    ladder: Tuple[Tuple[Number, Number], ...]
    gamma: Number = Fraction(1)

    @property
    def attained(self) -> bool:
        return close(self.gap, 0, get_config().FLOAT_TOLERANCE)

    @property
    def meets_bound(self) -> bool:
        """Совпадает ли результат поиска с оптимумом Хана в пределах TOLERANCE."""
        return close(self.value, self.bound, get_config().TOLERANCE)


@dataclass(frozen=True)
class Attainability:
    """
    Достигается ли sup_A |μ(A) - ν(A)| множествами и функциями разной регулярности.

    Свидетели хранятся, когда супремум достигается.
    """

    borel_witness: BorelSet
    open_witness: Optional[BorelSet] = None
    closed_witness: Optional[BorelSet] = None
    continuous_witness: Optional[TestFunction] = None

    @property
    def attained_by_open(self) -> bool:
        return self.open_witness is not None

    @property
    def attained_by_closed(self) -> bool:
        return self.closed_witness is not None

    @property
    def attained_by_continuous(self) -> bool:
        return self.continuous_witness is not None

    def summary(self) -> str:
        kinds = [name for name, flag in (("open", self.attained_by_open), ("closed", self.attained_by_closed),
                                         ("continuous", self.attained_by_continuous)) if flag]
        return "Borel only" if not kinds else "Borel, " + ", ".join(kinds)


@dataclass(frozen=True)
class TVReport:
    """
    Три соглашения о полной вариации рядом.

    Attributes:
        jordan_norm: |μ - ν|(X)
        sup_sets: sup_A |μ(A) - ν(A)|
        paper_tv: 2·sup_sets
        estimates: Оценки по классам
        attainability: Достижимость супремума
        hahn: Разложение Хана для μ - ν
    """

    jordan_norm: Number
    sup_sets: Number
    paper_tv: Number
    hahn: HahnDecomposition
    attainability: Attainability
    estimates: Dict[EstimatorClass, SupEstimate] = field(default_factory=dict)

    def mismatches(self) -> List[EstimatorClass]:
        """Классы, в которых поиск не сошёлся к оптимуму Хана."""
        return [estimator for estimator, estimate in self.estimates.items() if not estimate.meets_bound]


# Разложение Хана


def hahn(d: SignedMeasure) -> HahnDecomposition:
    """
    Точное разложение Хана.

    Args:
        d: Знаковая мера конечного вида с конечной вариацией

    Returns:
        HahnDecomposition: Множества и массы

    Raises:
        DivergentMassError: Вариация бесконечна
    """
    if d.space.kind == SpaceKind.REAL_LINE:
        positive_core, negative_core, positive = _real_parts(d)
    else:
        positive_core, negative_core = _natural_parts(d)
        positive = positive_core
    negative = positive.complement()
    null = positive_core.union(negative_core).complement()
    positive_mass = d.mass(positive)
    negative_mass = -d.mass(negative)
    logger.debug(f"Разложение Хана: P = {positive}, d(P) = {format_number(positive_mass)}, "
                 f"-d(N) = {format_number(negative_mass)}")
    return HahnDecomposition(positive, negative, positive_mass, negative_mass, positive_core, negative_core, null)


def _elementary(d: SignedMeasure) -> Tuple[List[Tuple[Interval, int]], List[Number]]:
    """
    Разбиение области на открытые интервалы постоянного знака суммарной плотности.

    Returns:
        Интервалы со знаком и точки разреза внутри области
    """
    domain = d.space.domain
    structural = sorted({p for p in d.breakpoints() if domain.lo < p < domain.hi})
    bounds = [domain.lo] + structural + [domain.hi]
    cells: List[Tuple[Interval, int]] = []
    cuts = set(structural)
    for lo, hi in zip(bounds, bounds[1:]):
        total = Poly()
        for interval, poly in d.segments:
            if interval.lo <= lo and hi <= interval.hi:
                total = total + poly
        roots = total.critical_points(lo, hi)
        cuts.update(roots)
        edges = [lo] + roots + [hi]
        for a, b in zip(edges, edges[1:]):
            cells.append((Interval(a, b), sign(total(sample_point(a, b))) if not total.is_zero else 0))
    for end, closed in ((domain.lo, domain.lo_closed), (domain.hi, domain.hi_closed)):
        if closed:
            cuts.add(end)
    return cells, sorted(cuts)


def _real_parts(d: SignedMeasure) -> Tuple[RealSet, RealSet, RealSet]:
    cells, cuts = _elementary(d)
    space = d.space
    positive_core = RealSet.build(space, [c for c, s in cells if s > 0],
                                  [p for p in cuts if d.atom_mass(p) > 0])
    negative_core = RealSet.build(space, [c for c, s in cells if s < 0],
                                  [p for p in cuts if d.atom_mass(p) < 0])
    # нулевые точки между двумя положительными интервалами сливают их
    bridges = [p for p in cuts if d.atom_mass(p) == 0
               and positive_core.contains(sample_point(_previous(cuts, p, space), p))
               and positive_core.contains(sample_point(p, _following(cuts, p, space)))]
    return positive_core, negative_core, positive_core.union(RealSet.build(space, points=bridges))


def _previous(cuts: Sequence[Number], p: Number, space: Space) -> Number:
    earlier = [c for c in cuts if c < p]
    return earlier[-1] if earlier else space.domain.lo


def _following(cuts: Sequence[Number], p: Number, space: Space) -> Number:
    later = [c for c in cuts if c > p]
    return later[0] if later else space.domain.hi


def weight(d: SignedMeasure, n: int) -> Number:
    """Масса точки n на натуральном пространстве."""
    return d.atom_mass(n) + sum((rule.weight(n) for rule in d.discrete), Fraction(0))


def _natural_parts(d: SignedMeasure) -> Tuple[NatSet, NatSet]:
    space = d.space
    rules = [r for r in d.discrete if r.coefficient != 0 and not r.support.is_empty]
    period = math.lcm(*(r.support.period for r in rules)) if rules else 1
    horizon = max([int(a.at) for a in d.atoms] + [r.support.horizon for r in rules] + [1]) + 1
    tail_signs: Dict[int, int] = {}
    for residue in range(period):
        groups: Dict[Number, Poly] = {}
        for rule in rules:
            if rule.support.in_pattern(residue):
                groups[rule.base] = groups.get(rule.base, Poly()) + rule.poly
        groups = {base: poly for base, poly in groups.items() if not poly.is_zero}
        if not groups:
            tail_signs[residue] = 0
            continue
        dominant = max(groups)
        tail_signs[residue] = sign(groups[dominant].highest[1])
        if len(groups) == 1:
            roots = groups[dominant].roots(0, INF)
            if roots:
                horizon = max(horizon, math.floor(max(roots)) + 2)
        else:
            horizon = max(horizon, _scan_sign_change(d, residue, period, tail_signs[residue]))
    positive = [n for n in range(1, horizon) if weight(d, n) > 0]
    negative = [n for n in range(1, horizon) if weight(d, n) < 0]
    tail = NatSet.tail(space, horizon)
    positive_tail = NatSet.residue_class(space, period, [r for r, s in tail_signs.items() if s > 0])
    negative_tail = NatSet.residue_class(space, period, [r for r, s in tail_signs.items() if s < 0])
    return (NatSet.finite(space, positive).union(positive_tail.intersection(tail)),
            NatSet.finite(space, negative).union(negative_tail.intersection(tail)))


def _scan_sign_change(d: SignedMeasure, residue: int, period: int, tail_sign: int) -> int:
    last = 0
    for n in range(residue or period, SIGN_SCAN_LIMIT, period):
        if sign(weight(d, n)) != tail_sign:
            last = n
    logger.debug(f"Знак веса на классе {residue} mod {period} стабилизируется после {last}")
    return last + 1


# Оценки супремума


def _exact_epsilon(epsilon: float) -> Fraction:
    return Fraction(repr(epsilon))


def _radius(space: Space, epsilon: Fraction) -> int:
    """Радиус усечения неограниченных частей для данного ε."""
    if space.is_natural:
        return math.ceil(math.sqrt(1 / epsilon))
    return math.ceil(1 / epsilon)


def _ball(space: Space, radius: int) -> BorelSet:
    if space.is_natural:
        return NatSet.finite(space, range(1, radius + 1))
    return RealSet.build(space, [Interval(-radius, radius, True, True)], clip=True)


def closed_inner(subset: BorelSet, epsilon: Fraction, radius: int) -> BorelSet:
    """Компакт внутри subset: открытые концы сдвинуты внутрь на ε, неограниченные части обрезаны."""
    space = subset.space
    truncated = subset.intersection(_ball(space, radius))
    if space.is_natural:
        return truncated
    intervals = []
    points = []
    for c in truncated.components():
        if c.is_point:
            points.append(c.lo)
            continue
        lo = c.lo if c.lo_closed else c.lo + epsilon
        hi = c.hi if c.hi_closed else c.hi - epsilon
        if lo < hi:
            intervals.append(Interval(lo, hi, True, True))
        elif lo == hi:
            points.append(lo)
    return RealSet.build(space, intervals, points)


def open_outer(subset: BorelSet, epsilon: Fraction, radius: int) -> BorelSet:
    """Открытое ограниченное множество: замкнутые концы и точки раздуты на ε."""
    space = subset.space
    if space.is_natural:
        return subset.intersection(_ball(space, radius))
    intervals = []
    for c in subset.components():
        lo = c.lo - epsilon if c.lo_closed else c.lo
        hi = c.hi + epsilon if c.hi_closed else c.hi
        intervals.append(Interval(max(lo, -radius), min(hi, radius)))
    return RealSet.build(space, intervals, clip=True)


def _smoothed(subset: BorelSet, epsilon: Fraction, radius: int) -> TestFunction:
    """Непрерывное приближение индикатора: шапка над компактом closed_inner."""
    core = closed_inner(subset, epsilon, radius)
    if core.is_empty:
        return indicator(core)
    if subset.space.is_natural:
        return indicator(core)
    return bump_over_closed(core, max(1, round(1 / epsilon)))


def sup_estimate(mu: SignedMeasure, nu: SignedMeasure, estimator: EstimatorClass, gamma: Number = 1,
                 epsilons: Optional[Iterable[float]] = None,
                 decomposition: Optional[HahnDecomposition] = None) -> SupEstimate:
    """
    Оценка супремума |μ(A) - ν(A)| или |∫f dμ - ∫f dν| по классу.

    Args:
        mu: Первая мера
        nu: Вторая мера
        estimator: Класс множеств или функций
        gamma: Граница γ для классов функций
        epsilons: Лестница ε (по умолчанию из конфигурации)
        decomposition: Готовое разложение Хана для μ - ν

    Returns:
        SupEstimate: Супремум, оптимум Хана и зазор на конечных ε

    Raises:
        UnsupportedMetricError: Пространство неметризуемо
        SpaceMismatchError: Меры на разных пространствах
    """
    if mu.space != nu.space:
        raise SpaceMismatchError(mu.space, nu.space)
    space = mu.space
    space.require_metric(f"sup_estimate[{estimator.value}]")
    gamma = Fraction(gamma) if not isinstance(gamma, float) else gamma
    d = mu.difference(nu)
    h = decomposition or hahn(d)
    epsilons = tuple(epsilons or get_config().EPSILON_LADDER)

    if estimator.is_function_class:
        bound = gamma * h.jordan_norm
    else:
        bound = h.sup_sets
    ladder: List[Tuple[Number, Number]] = []
    for epsilon in sorted((_exact_epsilon(raw) for raw in epsilons), reverse=True):
        radius = _radius(space, epsilon)
        ladder.append((epsilon, _candidate_value(d, h, estimator, gamma, epsilon, radius)))
    best = max((value for _, value in ladder), default=Fraction(0))
    value = search_limit([v for _, v in ladder])
    estimate = SupEstimate(estimator, value, bound, best, bound - best, tuple(ladder), gamma)
    logger.debug(f"Оценка {estimator.value}: предел {format_number(value)}, "
                 f"лучшее конечное {format_number(best)}, зазор {format_number(estimate.gap)}")
    if not estimate.meets_bound:
        logger.warning(f"Оценка {estimator.value}: поиск дал {format_number(value)}, "
                       f"оптимум Хана {format_number(bound)}")
    return estimate


def search_limit(values: Sequence[Number]) -> Number:
    """
    Предел значений кандидатов при ε → 0 по лестнице с убывающим ε.

    Ошибка кандидатов степенная по ε, а лестница геометрическая, поэтому
    шаг Эйткена по трём последним значениям снимает главный член ошибки.
    Без трёх точек или при несжимающихся разностях берётся последнее значение.
    """
    if not values:
        return Fraction(0)
    if len(values) >= 3:
        extrapolated = aitken(values)
        if extrapolated is not None:
            return extrapolated
    return values[-1]


def _candidate_value(d: SignedMeasure, h: HahnDecomposition, estimator: EstimatorClass, gamma: Number,
                     epsilon: Fraction, radius: int) -> Number:
    positive, negative = h.positive_set, h.negative_set
    if estimator in (EstimatorClass.CLOSED_BOUNDED_SETS, EstimatorClass.COMPACT_SETS):
        return max(abs(d.mass(closed_inner(s, epsilon, radius))) for s in (positive, negative))
    if estimator == EstimatorClass.OPEN_BOUNDED_SETS:
        return max(abs(d.mass(open_outer(s, epsilon, radius))) for s in (positive, negative))
    if estimator == EstimatorClass.M_GAMMA:
        f = linear_combination(indicator(positive), indicator(negative), gamma, -gamma)
    elif estimator == EstimatorClass.M_GAMMA_BOUNDED_SUPPORT:
        ball = _ball(d.space, radius)
        f = linear_combination(indicator(positive.intersection(ball)), indicator(negative.intersection(ball)),
                               gamma, -gamma)
    else:
        f = linear_combination(_smoothed(positive, epsilon, radius), _smoothed(negative, epsilon, radius),
                               gamma, -gamma)
    return abs(integrate(f, d).require_finite())


# Достижимость


def attainability(mu: SignedMeasure, nu: SignedMeasure,
                  decomposition: Optional[HahnDecomposition] = None) -> Attainability:
    """
    Достигается ли sup_sets открытым, замкнутым множеством или непрерывной функцией.

    Открытое множество O достигает супремума на стороне S тогда и только
    тогда, когда O лежит в S с точностью до нулевой части, поэтому
    достаточно проверить внутренность объединения ядра S с нулевым
    множеством. Замкнутое обязано содержать замыкание ядра. Непрерывная
    функция 0 ≤ f ≤ 1 достигает супремума, когда замыкания ядер двух
    сторон не пересекаются.
    """
    if mu.space != nu.space:
        raise SpaceMismatchError(mu.space, nu.space)
    d = mu.difference(nu)
    h = decomposition or hahn(d)
    target = h.sup_sets
    sides = h.dominant()
    witness = sides[0][0]
    open_witness = closed_witness = continuous_witness = None
    for side, core, opposite in sides:
        candidate = core.union(h.null_set).interior()
        if open_witness is None and _reaches(d, candidate, target):
            open_witness = candidate
        candidate = core.closure()
        if closed_witness is None and _reaches(d, candidate, target):
            closed_witness = candidate
        if continuous_witness is None:
            continuous_witness = _separating(core, opposite)
    if target == 0:
        open_witness = closed_witness = d.space.empty()
    return Attainability(witness, open_witness, closed_witness, continuous_witness)


def _reaches(d: SignedMeasure, subset: BorelSet, target: Number) -> bool:
    return close(abs(d.mass(subset)), target, get_config().FLOAT_TOLERANCE)


def _separating(core: BorelSet, opposite: BorelSet) -> Optional[TestFunction]:
    """Непрерывная функция, равная 1 на ядре и 0 на противоположном ядре, если она существует."""
    space = core.space
    left, right = core.closure(), opposite.closure()
    if not left.intersection(right).is_empty:
        return None
    if core.is_empty:
        return indicator(core)
    if space.kind == SpaceKind.DISCRETE_NAT:
        return indicator(core)
    if space.kind == SpaceKind.COFINITE_NAT:
        # непрерывные функции постоянны; 1 подходит, только если противоположное ядро пусто
        return indicator(space.whole()) if opposite.is_empty else None
    if opposite.is_empty:
        return indicator(space.whole())
    gap = min(right.distance(end) for c in left.components() for end in (c.lo, c.hi) if math.isfinite(end))
    return bump_over_closed(left, math.ceil(1 / gap) + 1)


def tv(mu: SignedMeasure, nu: SignedMeasure, classes: Optional[Iterable[EstimatorClass]] = None,
       gamma: Number = 1) -> TVReport:
    """
    Отчёт о расстоянии полной вариации.

    Args:
        mu: Первая мера
        nu: Вторая мера
        classes: Классы для оценок супремума (None: все, если пространство метризуемо)
        gamma: Граница γ для классов функций

    Returns:
        TVReport: jordan_norm, sup_sets, paper_tv, оценки и достижимость
    """
    if mu.space != nu.space:
        raise SpaceMismatchError(mu.space, nu.space)
    h = hahn(mu.difference(nu))
    estimates: Dict[EstimatorClass, SupEstimate] = {}
    if mu.space.is_metric:
        for estimator in (classes if classes is not None else list(EstimatorClass)):
            estimates[estimator] = sup_estimate(mu, nu, estimator, gamma, decomposition=h)
    elif classes:
        logger.warning(f"Оценки по классам пропущены: {mu.space} неметризуемо")
    report = TVReport(h.jordan_norm, h.sup_sets, 2 * h.sup_sets, h, attainability(mu, nu, h), estimates)
    logger.info(f"TV: jordan_norm = {format_number(report.jordan_norm)}, sup_sets = {format_number(report.sup_sets)}")
    return report
