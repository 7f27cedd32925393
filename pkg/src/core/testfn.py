"""
Пробные функции: кусочные функции в замкнутой форме с сертифицированными
метками регулярности, границей γ и описанием носителя.
"""
import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from scipy.optimize import brentq

from config import get_config
from core.numbers import INF, Number, exact, format_number
from core.poly import Poly, sample_point
from core.space import BorelSet, Interval, NatSet, RealSet, Space
from utils.enums import FunctionClass, Regularity, SpaceKind
from utils.exceptions import (
    DegenerateInputError,
    PreconditionError,
    SpaceMismatchError,
    UnsupportedClassError,
)

logger = logging.getLogger(__name__)

X = sympy.Symbol("x")

CONTINUOUS_TAGS = frozenset({
    Regularity.CONTINUOUS,
    Regularity.UNIFORMLY_CONTINUOUS,
    Regularity.HOLDER,
    Regularity.BOUNDED_MEASURABLE,
})


@lru_cache(maxsize=256)
def _lambdify(expression: str):
    return sympy.lambdify(X, sympy.sympify(expression), "numpy")


@dataclass(frozen=True)
class ExprFunction:
    """Выражение sympy от x, не сводящееся к Poly; интегрируется квадратурой."""

    expression: str

    def __call__(self, x: Number) -> float:
        return float(_lambdify(self.expression)(float(x)))

    def vectorized(self, xs: np.ndarray) -> np.ndarray:
        values = _lambdify(self.expression)(xs)
        return np.broadcast_to(np.asarray(values, dtype=float), xs.shape)

    def to_expr(self) -> str:
        return self.expression


Formula = Union[Poly, ExprFunction]


@dataclass(frozen=True)
class FunctionPiece:
    region: BorelSet
    formula: Formula


@dataclass(frozen=True)
class TestFunction:
    """
    Кусочная функция: formula на region для каждого куска, ноль вне кусков.

    Attributes:
        space: Пространство
        pieces: Куски с попарно непересекающимися областями
        bound: Граница γ: |f| ≤ γ всюду (может быть бесконечной)
        regularity: Сертифицированные метки
        holder: Пара (α, C) для метки HOLDER
        label: Имя для отчётов
    """

    __test__ = False

    space: Space
    pieces: Tuple[FunctionPiece, ...]
    bound: Number
    regularity: FrozenSet[Regularity] = frozenset()
    holder: Optional[Tuple[Number, Number]] = None
    label: str = ""

    def __post_init__(self):
        kept = tuple(p for p in self.pieces
                     if not p.region.is_empty and not (isinstance(p.formula, Poly) and p.formula.is_zero))
        object.__setattr__(self, "pieces", kept)

    def __call__(self, x: Number) -> Number:
        for piece in self.pieces:
            if piece.region.contains(x):
                return piece.formula(x)
        return Fraction(0)

    def has(self, tag: Regularity) -> bool:
        return tag in self.regularity

    @property
    def support(self) -> BorelSet:
        """Замыкание множества, где функция может быть ненулевой."""
        result = self.space.empty()
        for piece in self.pieces:
            result = result.union(piece.region)
        return result.closure()

    @property
    def support_bounded(self) -> bool:
        return self.support.is_bounded()

    @property
    def support_compact(self) -> bool:
        return self.support.is_compact()

    @property
    def is_exact(self) -> bool:
        return all(isinstance(p.formula, Poly) for p in self.pieces)

    def breakpoints(self) -> List[Number]:
        points = set()
        for piece in self.pieces:
            if isinstance(piece.region, RealSet):
                points.update(piece.region.breakpoints())
        return sorted(points)

    def is_nonnegative(self) -> bool:
        for piece in self.pieces:
            if isinstance(piece.formula, ExprFunction):
                if any(piece.formula(x) < 0 for x in _region_samples(piece.region)):
                    return False
                continue
            if isinstance(piece.region, NatSet):
                if piece.region.is_finite:
                    if any(piece.formula(n) < 0 for n in piece.region.exceptions):
                        return False
                elif not piece.formula.is_nonnegative_on(piece.region.horizon - 1, INF) or any(
                        piece.formula(n) < 0 for n in piece.region.elements(piece.region.horizon)):
                    return False
                continue
            for component in piece.region.components():
                if component.is_point:
                    if piece.formula(component.lo) < 0:
                        return False
                elif not piece.formula.is_nonnegative_on(component.lo, component.hi):
                    return False
        return True

    def scale(self, factor: Number) -> "TestFunction":
        factor = exact(factor)
        pieces = tuple(FunctionPiece(p.region, _scale_formula(p.formula, factor)) for p in self.pieces)
        holder = (self.holder[0], self.holder[1] * abs(factor)) if self.holder else None
        return replace(self, pieces=pieces, bound=self.bound * abs(factor), holder=holder,
                       label=f"{format_number(factor)}·{self.label}")

    def describe(self) -> str:
        if not self.pieces:
            return "0"
        parts = [f"{p.region}: {p.formula.to_expr()}" for p in self.pieces]
        return "pw[" + "; ".join(parts) + "]"


def _scale_formula(formula: Formula, factor: Number) -> Formula:
    if isinstance(formula, Poly):
        return formula * factor
    return ExprFunction(f"({format_number(factor)})*({formula.expression})")


def _region_samples(region: BorelSet, count: int = 64) -> List[Number]:
    if isinstance(region, NatSet):
        return region.elements(region.horizon + 2 * region.period + count)
    samples: List[Number] = []
    for component in region.components():
        if component.is_point:
            samples.append(component.lo)
            continue
        lo = component.lo if math.isfinite(component.lo) else min(component.hi, 0) - 1e3
        hi = component.hi if math.isfinite(component.hi) else max(component.lo, 0) + 1e3
        for t in np.linspace(0.0, 1.0, count)[1:-1]:
            samples.append(float(lo) + t * (float(hi) - float(lo)))
    return samples


def linear_combination(f: TestFunction, g: TestFunction, a: Number, b: Number) -> TestFunction:
    """
    Функция a·f + b·g на общем измельчении областей.

    Args:
        f: Первая функция
        g: Вторая функция
        a: Коэффициент при f
        b: Коэффициент при g

    Returns:
        TestFunction: Сумма с границей |a|γ_f + |b|γ_g и общими метками
    """
    if f.space != g.space:
        raise SpaceMismatchError(f.space, g.space)
    a, b = exact(a), exact(b)
    pieces: List[FunctionPiece] = []
    g_covered = f.space.empty()
    for pg in g.pieces:
        g_covered = g_covered.union(pg.region)
    f_covered = f.space.empty()
    for pf in f.pieces:
        f_covered = f_covered.union(pf.region)
        rest = pf.region.difference(g_covered)
        pieces.append(FunctionPiece(rest, _scale_formula(pf.formula, a)))
        for pg in g.pieces:
            overlap = pf.region.intersection(pg.region)
            pieces.append(FunctionPiece(overlap, _add_formulas(_scale_formula(pf.formula, a),
                                                               _scale_formula(pg.formula, b))))
    for pg in g.pieces:
        pieces.append(FunctionPiece(pg.region.difference(f_covered), _scale_formula(pg.formula, b)))
    regularity = f.regularity & g.regularity
    holder = None
    if f.holder and g.holder and f.holder[0] == g.holder[0]:
        holder = (f.holder[0], abs(a) * f.holder[1] + abs(b) * g.holder[1])
    elif Regularity.HOLDER in regularity:
        regularity = regularity - {Regularity.HOLDER}
    return TestFunction(f.space, tuple(pieces), abs(a) * f.bound + abs(b) * g.bound, regularity, holder,
                        f"{format_number(a)}·{f.label} + {format_number(b)}·{g.label}")


def _add_formulas(left: Formula, right: Formula) -> Formula:
    if isinstance(left, Poly) and isinstance(right, Poly):
        return left + right
    return ExprFunction(f"({left.to_expr()}) + ({right.to_expr()})")


# Фабрики


def constant(space: Space, value: Number, label: str = "") -> TestFunction:
    value = exact(value)
    tags = set(CONTINUOUS_TAGS)
    if not space.is_metric:
        tags -= {Regularity.UNIFORMLY_CONTINUOUS, Regularity.HOLDER}
    holder = (Fraction(1), Fraction(0)) if space.is_metric else None
    return TestFunction(space, (FunctionPiece(space.whole(), Poly.const(value)),), abs(value),
                        frozenset(tags), holder, label or f"const {format_number(value)}")


def indicator(subset: BorelSet, label: str = "") -> TestFunction:
    """
    Индикатор 1_A с γ = 1.

    На DiscreteNat любая функция непрерывна и липшицева с константой 2γ
    (расстояния между различными точками не меньше 1), поэтому индикатор
    получает и метки непрерывности.
    """
    space = subset.space
    tags = {Regularity.BOUNDED_MEASURABLE}
    holder = None
    if space.kind == SpaceKind.DISCRETE_NAT:
        tags |= {Regularity.CONTINUOUS, Regularity.UNIFORMLY_CONTINUOUS, Regularity.HOLDER}
        holder = (Fraction(1), Fraction(1))
    elif space.kind == SpaceKind.COFINITE_NAT and (subset.is_empty or subset.is_whole()):
        tags |= {Regularity.CONTINUOUS}
    return TestFunction(space, (FunctionPiece(subset, Poly.const(1)),), Fraction(1), frozenset(tags), holder,
                        label or f"1_{subset}")


def piecewise_from_knots(space: Space, knots: Sequence[Number], value: Callable[[Number], Number],
                         gap_value: Optional[Callable[[Number], Number]] = None,
                         region: Optional[RealSet] = None) -> Tuple[FunctionPiece, ...]:
    """
    Кусочно-линейная функция по значениям в узлах излома.

    Между соседними узлами функция линейна и проходит через значения
    gap_value (непрерывное продолжение); в самих узлах берётся value.
    За крайними узлами функция постоянна. Куски обрезаются по области
    пространства и, если задан region, по нему.

    Args:
        space: Пространство RealLine
        knots: Все точки излома на ℝ
        value: Значение функции в точке
        gap_value: Непрерывное продолжение для интерполяции (по умолчанию value)
        region: Множество, вне которого функция равна нулю

    Returns:
        Tuple[FunctionPiece, ...]: Куски
    """
    gap_value = gap_value or value
    knots = sorted(set(knots))
    pieces: List[FunctionPiece] = []

    def add(interval: Interval, formula: Poly) -> None:
        if formula.is_zero:
            return
        part = RealSet.build(space, [interval], clip=True)
        if region is not None:
            part = part.intersection(region)
        if not part.is_empty:
            pieces.append(FunctionPiece(part, formula))

    if not knots:
        add(Interval(-INF, INF), Poly.const(gap_value(Fraction(0))))
        return tuple(pieces)
    add(Interval(-INF, knots[0]), Poly.const(gap_value(knots[0])))
    add(Interval(knots[-1], INF), Poly.const(gap_value(knots[-1])))
    for left, right in zip(knots, knots[1:]):
        add(Interval(left, right), Poly.linear_through(left, gap_value(left), right, gap_value(right)))
    for knot in knots:
        if space.domain.contains(knot):
            add(Interval.point(knot), Poly.const(value(knot)))
    return tuple(pieces)


def bump_over_closed(subset: BorelSet, n: int) -> TestFunction:
    """
    Функция 1 - n·ρ(x, A), обрезанная нулём снизу.

    Равна 1 на A, 0 на расстоянии ≥ 1/n, липшицева с константой n;
    убывает по n к индикатору A.

    Args:
        subset: Замкнутое множество A
        n: Натуральный параметр

    Returns:
        TestFunction: Функция с метками непрерывности и Гёльдера (1, n)

    Raises:
        UnsupportedMetricError: Пространство неметризуемо
        PreconditionError: A не замкнуто или n < 1
    """
    space = subset.space
    space.require_metric("bump_over_closed")
    if n < 1:
        raise PreconditionError(f"Параметр n должен быть натуральным: {n}")
    if not subset.is_closed():
        raise PreconditionError(f"Множество {subset} не замкнуто")
    holder = (Fraction(1), Fraction(n))
    tags = frozenset(CONTINUOUS_TAGS)
    if space.is_natural:
        # целые расстояния: 1 - n·ρ ≤ 0 вне A
        return TestFunction(space, (FunctionPiece(subset, Poly.const(1)),), Fraction(1), tags, holder,
                            f"bump⁺({subset}, {n})")
    width = Fraction(1, n)
    components = subset.components()
    knots: List[Number] = []
    for component in components:
        for end in (component.lo, component.hi):
            if math.isfinite(end):
                knots.extend([end - width, end, end + width])
    for left, right in zip(components, components[1:]):
        knots.append((left.hi + right.lo) / 2)

    def value(x: Number) -> Number:
        return max(Fraction(0), 1 - n * subset.distance(x))

    pieces = piecewise_from_knots(space, knots, value)
    return TestFunction(space, pieces, Fraction(1), _with_decay(space, pieces, tags), holder,
                        f"bump⁺({subset}, {n})")


def bump_under_open(subset: BorelSet, n: int) -> TestFunction:
    """
    Функция min(1, n·ρ(x, ∂B)) на B и 0 вне B.

    0 ≤ g ≤ 1_B, g = 1 на точках B глубже 1/n, возрастает по n к 1_B.

    Raises:
        UnsupportedMetricError: Пространство неметризуемо
        PreconditionError: B не открыто
        DegenerateInputError: Внутренний запас глубины 1/n пуст
    """
    space = subset.space
    space.require_metric("bump_under_open")
    if n < 1:
        raise PreconditionError(f"Параметр n должен быть натуральным: {n}")
    if not subset.is_open():
        raise PreconditionError(f"Множество {subset} не открыто")
    holder = (Fraction(1), Fraction(n))
    tags = frozenset(CONTINUOUS_TAGS)
    if subset.is_empty:
        raise DegenerateInputError(f"Пустое множество не имеет внутреннего запаса глубины 1/{n}")
    if space.is_natural:
        return TestFunction(space, (FunctionPiece(subset, Poly.const(1)),), Fraction(1), tags, holder,
                            f"bump⁻({subset}, {n})")
    frontier = subset.boundary()
    points = [c.lo for c in frontier.components()]
    width = Fraction(1, n)
    knots: List[Number] = []
    for p in points:
        knots.extend([p - width, p, p + width])
    for left, right in zip(points, points[1:]):
        knots.append((left + right) / 2)

    def depth(x: Number) -> Number:
        return min(Fraction(1), n * frontier.distance(x)) if points else Fraction(1)

    def value(x: Number) -> Number:
        return depth(x) if subset.contains(x) else Fraction(0)

    pieces = piecewise_from_knots(space, knots, value, gap_value=depth, region=subset)
    peak = max((value(k) for k in knots if space.domain.contains(k)), default=Fraction(0))
    rays = [p.formula for p in pieces if p.formula.is_constant]
    if peak < 1 and not any(r.constant_value == 1 for r in rays):
        raise DegenerateInputError(f"У множества {subset} нет точек глубже 1/{n}")
    return TestFunction(space, pieces, Fraction(1), _with_decay(space, pieces, tags), holder,
                        f"bump⁻({subset}, {n})")


def _with_decay(space: Space, pieces: Iterable[FunctionPiece], tags: FrozenSet[Regularity]) -> FrozenSet[Regularity]:
    support = space.empty()
    for piece in pieces:
        support = support.union(piece.region)
    if support.closure().is_compact():
        return tags | {Regularity.VANISHES_AT_INFINITY}
    return tags


def truncate(f: TestFunction, k: Number) -> TestFunction:
    """
    Усечение 1_{f<k}·f.

    Args:
        f: Функция
        k: Порог

    Returns:
        TestFunction: Ограниченная измеримая функция
    """
    k = exact(k)
    pieces: List[FunctionPiece] = []
    for piece in f.pieces:
        below = _sublevel(piece, k)
        if not below.is_empty:
            pieces.append(FunctionPiece(below, piece.formula))
    bound = min(f.bound, k) if f.is_nonnegative() else f.bound
    return TestFunction(f.space, tuple(pieces), bound, frozenset({Regularity.BOUNDED_MEASURABLE}), None,
                        f"trunc({f.label}, {format_number(k)})")


def _sublevel(piece: FunctionPiece, k: Number) -> BorelSet:
    """Подмножество области куска, где формула меньше k."""
    region, formula = piece.region, piece.formula
    if isinstance(region, NatSet):
        return _sublevel_natural(region, formula, k)
    intervals: List[Interval] = []
    points: List[Number] = []
    for component in region.components():
        if component.is_point:
            if formula(component.lo) < k:
                points.append(component.lo)
            continue
        if isinstance(formula, Poly):
            shifted = formula - k
            cuts = shifted.critical_points(component.lo, component.hi)
            signs = shifted.sign_pattern(component.lo, component.hi)
        else:
            cuts = _expr_crossings(formula, component, k)
            bounds = [component.lo] + cuts + [component.hi]
            signs = [(lo, hi, -1 if formula(sample_point(lo, hi)) < k else 1)
                     for lo, hi in zip(bounds, bounds[1:])]
        for lo, hi, s in signs:
            if s < 0:
                intervals.append(Interval(lo, hi))
        for cut in cuts:
            if _safe_value(formula, cut) is not None and _safe_value(formula, cut) < k:
                points.append(cut)
        for end, closed in ((component.lo, component.lo_closed), (component.hi, component.hi_closed)):
            if closed and _safe_value(formula, end) is not None and _safe_value(formula, end) < k:
                points.append(end)
    return RealSet.build(region.space, intervals, points)


def _safe_value(formula: Formula, x: Number) -> Optional[Number]:
    try:
        return formula(x)
    except (ZeroDivisionError, ValueError):
        return None


def _sublevel_natural(region: NatSet, formula: Formula, k: Number) -> NatSet:
    if region.is_finite:
        return NatSet.finite(region.space, [n for n in region.exceptions if formula(n) < k])
    if not isinstance(formula, Poly):
        raise PreconditionError("Усечение выражений на ℕ не поддерживается")
    roots = (formula - k).roots(0, INF)
    limit = max(region.horizon, math.floor(max(roots, default=0)) + 1) + region.period
    head = NatSet.finite(region.space, [n for n in region.elements(limit) if formula(n) < k])
    if formula(limit + 1) < k:
        return head.union(region.intersection(NatSet.tail(region.space, limit + 1)))
    return head


def _expr_crossings(formula: ExprFunction, component: Interval, k: Number) -> List[float]:
    """Точки, где выражение пересекает уровень k, по смене знака на сетке и brentq."""
    lo = float(component.lo) if math.isfinite(component.lo) else min(float(component.hi), 0.0) - 1e6
    hi = float(component.hi) if math.isfinite(component.hi) else max(float(component.lo), 0.0) + 1e6
    grid = np.linspace(lo, hi, 4097)[1:-1]
    values = formula.vectorized(grid) - float(k)
    crossings: List[float] = []
    for i in range(len(grid) - 1):
        if values[i] == 0:
            crossings.append(float(grid[i]))
        elif values[i] * values[i + 1] < 0:
            crossings.append(brentq(lambda t: formula(t) - float(k), grid[i], grid[i + 1]))
    return crossings


def check_holder(f: TestFunction, alpha: Number, constant: Number, pairs: Optional[int] = None,
                 seed: int = 0, tol: float = 1e-12) -> bool:
    """
    Выборочная проверка |f(x) - f(y)| ≤ C·|x - y|^α.

    Пары берутся вокруг точек излома функции: половина случайных по окну,
    половина близких (на расстоянии до 1e-3).
    """
    if not f.space.is_metric:
        raise UnsupportedClassError("Условие Гёльдера требует метрики")
    pairs = pairs or get_config().HOLDER_SAMPLE_PAIRS
    rng = np.random.default_rng(seed)
    if f.space.is_natural:
        top = max([n for p in f.pieces if isinstance(p.region, NatSet) for n in p.region.exceptions] + [8]) + 8
        xs = rng.integers(1, top + 1, size=pairs)
        ys = rng.integers(1, top + 1, size=pairs)
    else:
        points = [float(b) for b in f.breakpoints()] or [0.0]
        lo, hi = min(points) - 1.0, max(points) + 1.0
        domain = f.space.domain
        lo = max(lo, float(domain.lo)) if math.isfinite(domain.lo) else lo
        hi = min(hi, float(domain.hi)) if math.isfinite(domain.hi) else hi
        half = pairs // 2
        xs = rng.uniform(lo, hi, size=pairs)
        ys = np.concatenate([rng.uniform(lo, hi, size=half),
                             xs[half:] + rng.uniform(-1e-3, 1e-3, size=pairs - half)])
        ys = np.clip(ys, lo, hi)
    whole = f.space.whole()
    for x, y in zip(xs, ys):
        x, y = float(x), float(y)
        if not (whole.contains(x) and whole.contains(y)):
            continue
        gap = abs(float(f(x)) - float(f(y)))
        if gap > float(constant) * abs(x - y) ** float(alpha) + tol:
            logger.debug(f"Нарушение условия Гёльдера в паре ({x}, {y}): {gap}")
            return False
    return True


# Случайные семейства


def random_family(space: Space, function_class: FunctionClass, gamma: Number = 1, seed: int = 0,
                  count: int = 10, nonnegative: bool = False) -> List[TestFunction]:
    """
    Детерминированное по seed семейство функций класса function_class.

    Узлы и значения берутся из сетки с шагом 1/64 (значения кратны γ/16),
    поэтому интегралы против рациональных мер остаются точными.

    Args:
        space: Пространство
        function_class: Класс функций
        gamma: Граница |f| ≤ γ
        seed: Зерно генератора
        count: Число функций
        nonnegative: Только неотрицательные значения

    Returns:
        List[TestFunction]: Функции с метками, соответствующими классу

    Raises:
        UnsupportedClassError: Класс не поддерживается на данном пространстве
    """
    gamma = exact(gamma)
    rng = np.random.default_rng(seed)
    if space.kind == SpaceKind.COFINITE_NAT:
        return _cofinite_family(space, function_class, gamma, rng, count, nonnegative)
    if space.kind == SpaceKind.DISCRETE_NAT:
        return _natural_family(space, function_class, gamma, rng, count, nonnegative)
    return [_real_member(space, function_class, gamma, rng, nonnegative, index) for index in range(count)]


def _random_value(rng: np.random.Generator, gamma: Number, nonnegative: bool) -> Fraction:
    low = 0 if nonnegative else -16
    return gamma * Fraction(int(rng.integers(low, 17)), 16)


def sampling_window(space: Space) -> Tuple[Number, Number]:
    domain = space.domain
    if math.isfinite(domain.lo) and math.isfinite(domain.hi):
        return domain.lo, domain.hi
    if math.isfinite(domain.lo):
        return domain.lo, domain.lo + 8
    if math.isfinite(domain.hi):
        return domain.hi - 8, domain.hi
    return Fraction(-4), Fraction(4)


def _random_knots(rng: np.random.Generator, lo: Number, hi: Number, low: int, high: int) -> List[Number]:
    size = int(rng.integers(low, high + 1))
    steps = sorted(int(s) for s in rng.choice(np.arange(1, 64), size=size, replace=False))
    return [lo + (hi - lo) * Fraction(s, 64) for s in steps]


def _real_member(space: Space, function_class: FunctionClass, gamma: Number, rng: np.random.Generator,
                 nonnegative: bool, index: int) -> TestFunction:
    lo, hi = sampling_window(space)
    label = f"{function_class.value}#{index}"
    if function_class == FunctionClass.M_GAMMA:
        return _real_step(space, gamma, rng, nonnegative, lo, hi, label)
    knots = _random_knots(rng, lo, hi, 3, 7)
    values = [_random_value(rng, gamma, nonnegative) for _ in knots]
    domain = space.domain
    tags = set(CONTINUOUS_TAGS)
    tail_pieces: List[FunctionPiece] = []
    if function_class in (FunctionClass.CC, FunctionClass.HOLDER):
        values[0] = values[-1] = Fraction(0)
        tags.add(Regularity.VANISHES_AT_INFINITY)
    elif function_class == FunctionClass.C0:
        tags.add(Regularity.VANISHES_AT_INFINITY)
        # на конечном открытом конце и на бесконечности функция стремится к нулю
        if not (domain.lo == -INF and knots[0] < 0) and not (math.isfinite(domain.lo) and domain.lo_closed):
            values[0] = Fraction(0)
        if not (domain.hi == INF and knots[-1] > 0) and not (math.isfinite(domain.hi) and domain.hi_closed):
            values[-1] = Fraction(0)
        tags -= {Regularity.HOLDER, Regularity.UNIFORMLY_CONTINUOUS}
    table = dict(zip(knots, values))

    def value(x: Number) -> Number:
        return table[x]

    pieces = list(piecewise_from_knots(space, knots, value))
    if function_class == FunctionClass.C0:
        # лучи до ±∞ заменяются хвостами c·x_0/x
        pieces = [p for p in pieces if not _unbounded(p.region)]
        if domain.hi == INF and knots[-1] > 0 and values[-1] != 0:
            region = RealSet.build(space, [Interval(knots[-1], INF)], clip=True)
            tail_pieces.append(FunctionPiece(region, Poly.monomial(values[-1] * knots[-1], -1)))
        if domain.lo == -INF and knots[0] < 0 and values[0] != 0:
            region = RealSet.build(space, [Interval(-INF, knots[0])], clip=True)
            tail_pieces.append(FunctionPiece(region, Poly.monomial(values[0] * knots[0], -1)))
    slopes = [abs(v1 - v0) / (x1 - x0) for (x0, v0), (x1, v1) in zip(zip(knots, values), zip(knots[1:], values[1:]))]
    lipschitz = max(slopes, default=Fraction(0))
    holder = (Fraction(1), lipschitz) if Regularity.HOLDER in tags else None
    return TestFunction(space, tuple(pieces + tail_pieces), gamma, frozenset(tags), holder, label)


def _unbounded(region: BorelSet) -> bool:
    return isinstance(region, RealSet) and (region.infimum() == -INF or region.supremum() == INF)


def _real_step(space: Space, gamma: Number, rng: np.random.Generator, nonnegative: bool,
               lo: Number, hi: Number, label: str) -> TestFunction:
    cuts = _random_knots(rng, lo, hi, 4, 8)
    pieces: List[FunctionPiece] = []
    for left, right in zip(cuts, cuts[1:]):
        region = RealSet.build(space, [Interval(left, right)], clip=True)
        pieces.append(FunctionPiece(region, Poly.const(_random_value(rng, gamma, nonnegative))))
    for cut in cuts:
        if space.domain.contains(cut):
            pieces.append(FunctionPiece(RealSet.build(space, points=[cut]),
                                        Poly.const(_random_value(rng, gamma, nonnegative))))
    if rng.integers(0, 2):
        region = RealSet.build(space, [Interval(cuts[-1], INF)], clip=True)
        pieces.append(FunctionPiece(region, Poly.const(_random_value(rng, gamma, nonnegative))))
    return TestFunction(space, tuple(pieces), gamma, frozenset({Regularity.BOUNDED_MEASURABLE}), None, label)


def _natural_family(space: Space, function_class: FunctionClass, gamma: Number, rng: np.random.Generator,
                    count: int, nonnegative: bool) -> List[TestFunction]:
    family: List[TestFunction] = []
    tags = set(CONTINUOUS_TAGS)
    for index in range(count):
        label = f"{function_class.value}#{index}"
        if function_class == FunctionClass.C0 and index == 0:
            # g(n) = γ/n
            family.append(TestFunction(space, (FunctionPiece(space.whole(), Poly.monomial(gamma, -1)),), gamma,
                                       frozenset(tags | {Regularity.VANISHES_AT_INFINITY}),
                                       (Fraction(1), 2 * gamma), "1/n" if gamma == 1 else f"{gamma}/n"))
            continue
        size = int(rng.integers(1, 7))
        support = sorted(int(s) for s in rng.choice(np.arange(1, 33), size=size, replace=False))
        pieces = [FunctionPiece(NatSet.finite(space, [n]), Poly.const(_random_value(rng, gamma, nonnegative)))
                  for n in support]
        start = support[-1] + 1
        tail = NatSet.tail(space, start)
        member_tags = set(tags)
        if function_class == FunctionClass.C0:
            c = _random_value(rng, gamma, nonnegative)
            pieces.append(FunctionPiece(tail, Poly.monomial(c * start, -1)))
            member_tags.add(Regularity.VANISHES_AT_INFINITY)
        elif function_class in (FunctionClass.CB, FunctionClass.M_GAMMA, FunctionClass.UNIFORMLY_CONTINUOUS):
            pieces.append(FunctionPiece(tail, Poly.const(_random_value(rng, gamma, nonnegative))))
        else:
            member_tags.add(Regularity.VANISHES_AT_INFINITY)
        family.append(TestFunction(space, tuple(pieces), gamma, frozenset(member_tags), (Fraction(1), 2 * gamma),
                                   label))
    return family


def _cofinite_family(space: Space, function_class: FunctionClass, gamma: Number, rng: np.random.Generator,
                     count: int, nonnegative: bool) -> List[TestFunction]:
    if function_class in (FunctionClass.HOLDER, FunctionClass.UNIFORMLY_CONTINUOUS):
        raise UnsupportedClassError(f"Класс {function_class.value} требует метрики, а {space} неметризуемо")
    family: List[TestFunction] = []
    for index in range(count):
        label = f"{function_class.value}#{index}"
        if function_class != FunctionClass.M_GAMMA:
            # в коконечной топологии непрерывные функции со значениями в ℝ постоянны
            family.append(constant(space, _random_value(rng, gamma, nonnegative), label))
            continue
        size = int(rng.integers(1, 7))
        support = sorted(int(s) for s in rng.choice(np.arange(1, 33), size=size, replace=False))
        pieces = [FunctionPiece(NatSet.finite(space, [n]), Poly.const(_random_value(rng, gamma, nonnegative)))
                  for n in support]
        pieces.append(FunctionPiece(NatSet.cofinite(space, support), Poly.const(_random_value(rng, gamma, nonnegative))))
        family.append(TestFunction(space, tuple(pieces), gamma, frozenset({Regularity.BOUNDED_MEASURABLE}), None,
                                   label))
    return family
