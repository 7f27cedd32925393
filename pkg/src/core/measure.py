"""
Символьные меры: атомы Дирака, куски с плотностью в замкнутой форме
и дискретные правила весов на ℕ.
"""
import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Tuple

from scipy.special import zeta

from config import get_config
from core.density import DensityForm, Segment
from core.numbers import Number, exact, format_number, is_exact, sign
from core.poly import Poly
from core.space import BorelSet, Interval, NatSet, RealSet, Space
from utils.enums import RuleKind, TailKind
from utils.exceptions import (
    DivergentIntegralError,
    DivergentMassError,
    DomainError,
    IntegrationError,
    PreconditionError,
    SpaceMismatchError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Atom:
    at: Number
    mass: Number


@dataclass(frozen=True)
class Piece:
    interval: Interval
    density: DensityForm


@dataclass(frozen=True)
class DiscreteRule:
    """
    Правило весов на ℕ: w(n) = c, c·n^p или c·r^n для n из support.

    Attributes:
        kind: Вид правила
        coefficient: Коэффициент c (знак допускается только у SignedMeasure)
        support: Множество, на котором правило действует
        exponent: Показатель p для степенного правила
        ratio: Знаменатель r > 0 для геометрического правила
    """

    kind: RuleKind
    coefficient: Number
    support: NatSet
    exponent: Fraction = Fraction(0)
    ratio: Number = Fraction(1)

    @property
    def poly(self) -> Poly:
        """Многочленная часть веса: c или c·n^p."""
        if self.kind == RuleKind.POWER:
            return Poly.monomial(self.coefficient, self.exponent)
        return Poly.const(self.coefficient)

    @property
    def base(self) -> Number:
        return self.ratio if self.kind == RuleKind.GEOMETRIC else Fraction(1)

    def weight(self, n: int) -> Number:
        if not self.support.contains(n):
            return Fraction(0)
        return self.poly(n) * (self.base ** n)

    @property
    def tail(self) -> TailKind:
        """Классификация хвоста ряда по носителю."""
        if self.support.is_finite or self.coefficient == 0:
            return TailKind.SUMMABLE
        if self.kind == RuleKind.COUNTING:
            return TailKind.DIVERGENT
        if self.kind == RuleKind.POWER:
            return TailKind.SUMMABLE if self.exponent < -1 else TailKind.DIVERGENT
        return TailKind.SUMMABLE if self.ratio < 1 else TailKind.DIVERGENT

    def restrict(self, subset: NatSet) -> "DiscreteRule":
        return replace(self, support=self.support.intersection(subset))

    def scale(self, factor: Number) -> "DiscreteRule":
        return replace(self, coefficient=exact(self.coefficient * factor))

    def describe(self) -> str:
        c = format_number(self.coefficient)
        if self.kind == RuleKind.COUNTING:
            return f"{c} на {self.support}"
        if self.kind == RuleKind.POWER:
            return f"{c}·n^{format_number(self.exponent)} на {self.support}"
        return f"{c}·{format_number(self.ratio)}^n на {self.support}"


def discrete_series(subset: NatSet, poly: Poly, base: Number = Fraction(1),
                    max_terms: Optional[int] = None, threshold: Optional[float] = None) -> Number:
    """
    Сумма Σ poly(n)·base^n по n из subset.

    Конечные множества суммируются точно. Для бесконечных хвост каждого
    вычета шаблона считается через дзета-функцию Гурвица (base = 1) или
    геометрическую прогрессию (base < 1); исключения добавляются поправками.

    Args:
        subset: Финально периодическое множество
        poly: Многочленная часть слагаемого
        base: Основание геометрического множителя, 0 < base
        max_terms: Предел числа слагаемых при оценке частичной суммы
        threshold: Порог частичной суммы, после которого фиксируется расходимость

    Returns:
        Number: Значение суммы

    Raises:
        DivergentMassError: Ряд расходится; несёт достигнутую частичную сумму
    """
    if poly.is_zero or subset.is_empty:
        return Fraction(0)
    if subset.is_finite:
        return sum((poly(n) * base ** n for n in subset.exceptions), Fraction(0))
    top_exponent, top_coefficient = poly.highest
    diverges = base > 1 or (base == 1 and top_exponent >= -1)
    if diverges:
        _raise_divergence(subset, poly, base, sign(top_coefficient), max_terms, threshold)
    total: Number = Fraction(0)
    for first in subset.pattern_residues_from(1):
        total += _residue_tail(first, subset.period, poly, base, max_terms)
    for n in subset.exceptions:
        term = poly(n) * base ** n
        total += -term if subset.in_pattern(n) else term
    return total


def _residue_tail(first: int, period: int, poly: Poly, base: Number, max_terms: Optional[int]) -> Number:
    """Σ_k poly(first + period·k)·base^(first + period·k), k ≥ 0."""
    if base == 1:
        # (first + q k)^p = q^p (k + first/q)^p
        total = 0.0
        for exponent, coefficient in poly.terms:
            total += float(coefficient) * period ** float(exponent) * float(zeta(-float(exponent), first / period))
        return total
    if poly.is_constant and is_exact(base):
        c = poly.constant_value
        return c * base ** first / (1 - base ** period)
    limit = max_terms or get_config().DIVERGENCE_MAX_TERMS
    total = 0.0
    for k in range(limit):
        n = first + period * k
        term = float(poly(n)) * float(base) ** n
        total += term
        if k > 8 and abs(term) <= 1e-17 * max(abs(total), 1e-300):
            break
    return total


def _raise_divergence(subset: NatSet, poly: Poly, base: Number, direction: int,
                      max_terms: Optional[int], threshold: Optional[float]) -> None:
    config = get_config()
    max_terms = max_terms or config.DIVERGENCE_MAX_TERMS
    threshold = threshold or config.DIVERGENCE_THRESHOLD
    partial = 0.0
    count = 0
    for n in subset.iterate():
        partial += float(poly(n)) * float(base) ** n
        count += 1
        if abs(partial) > threshold or count >= max_terms:
            break
    logger.warning(f"Дискретный ряд расходится: частичная сумма {partial:.6g} после {count} членов")
    raise DivergentMassError(direction, partial, count)


@dataclass(frozen=True)
class SignedMeasure:
    """
    Знаковая мера конечного вида.

    Attributes:
        space: Пространство
        atoms: Атомы (точка, масса); на одной точке не более одного атома
        pieces: Куски (интервал, плотность); на RealLine
        discrete: Дискретные правила; на ℕ
    """

    space: Space
    atoms: Tuple[Atom, ...] = ()
    pieces: Tuple[Piece, ...] = ()
    discrete: Tuple[DiscreteRule, ...] = ()

    def __post_init__(self):
        merged: Dict[Number, Number] = {}
        for atom in self.atoms:
            at = exact(atom.at)
            self._check_point(at)
            merged[at] = merged.get(at, Fraction(0)) + exact(atom.mass)
        atoms = tuple(Atom(at, mass) for at, mass in sorted(merged.items()) if mass != 0)
        object.__setattr__(self, "atoms", atoms)
        if self.pieces and self.space.is_natural:
            raise DomainError(f"Куски с плотностью недопустимы на {self.space}")
        if self.discrete and not self.space.is_natural:
            raise DomainError(f"Дискретные правила недопустимы на {self.space}")
        for piece in self.pieces:
            if not self.space.domain.contains_interval(piece.interval):
                raise DomainError(f"Кусок {piece.interval} лежит вне области {self.space.domain}")
        for rule in self.discrete:
            if rule.support.space != self.space:
                raise DomainError(f"Носитель правила {rule.describe()} задан на другом пространстве")
            if rule.kind == RuleKind.GEOMETRIC and rule.ratio <= 0:
                raise DomainError(f"Знаменатель геометрического правила должен быть положительным: {rule.ratio}")

    def _check_point(self, at: Number) -> None:
        if self.space.is_natural:
            if not NatSet.cofinite(self.space, []).contains(at):
                raise DomainError(f"Атом в точке {at} вне ℕ")
        elif not self.space.domain.contains(at):
            raise DomainError(f"Атом в точке {format_number(at)} вне области {self.space.domain}")

    # Конструкторы

    @classmethod
    def zero(cls, space: Space):
        return cls(space)

    @classmethod
    def dirac(cls, space: Space, at: Number, mass: Number = 1):
        return cls(space, atoms=(Atom(at, mass),))

    @classmethod
    def with_density(cls, space: Space, interval: Interval, density: DensityForm):
        return cls(space, pieces=(Piece(interval, density),))

    # Структура

    @cached_property
    def segments(self) -> List[Segment]:
        """Все куски плотности, сведённые к парам (интервал, Poly)."""
        result: List[Segment] = []
        for piece in self.pieces:
            result.extend(piece.density.segments(piece.interval))
        return result

    @property
    def is_zero(self) -> bool:
        return not self.atoms and not self.segments and all(
            r.coefficient == 0 or r.support.is_empty for r in self.discrete)

    def atom_mass(self, x: Number) -> Number:
        for atom in self.atoms:
            if atom.at == x:
                return atom.mass
        return Fraction(0)

    def density_at(self, x: Number) -> Number:
        total: Number = Fraction(0)
        for interval, poly in self.segments:
            if interval.lo < x < interval.hi:
                total += poly(x)
        return total

    def breakpoints(self) -> List[Number]:
        """Концы кусков и атомы: точки, где может меняться вид меры."""
        points = {atom.at for atom in self.atoms}
        for interval, _ in self.segments:
            for end in (interval.lo, interval.hi):
                if math.isfinite(end):
                    points.add(end)
        return sorted(points)

    def support(self) -> BorelSet:
        """Множество, вне которого мера нулевая (грубая оценка носителя)."""
        if self.space.is_natural:
            result = NatSet.finite(self.space, [a.at for a in self.atoms])
            for rule in self.discrete:
                if rule.coefficient != 0:
                    result = result.union(rule.support)
            return result
        return RealSet.build(self.space, [i for i, _ in self.segments], [a.at for a in self.atoms], clip=True)

    @property
    def is_finite(self) -> bool:
        return all(rule.tail == TailKind.SUMMABLE for rule in self.discrete)

    # Вычисление масс

    def mass(self, subset: BorelSet) -> Number:
        """
        Мера множества.

        Args:
            subset: Каноническое множество того же пространства

        Returns:
            Number: Точное значение на рациональном пути

        Raises:
            SpaceMismatchError: Множество задано на другом пространстве
            DivergentMassError: Дискретная сумма по множеству расходится
        """
        if subset.space != self.space:
            raise SpaceMismatchError(self.space, subset.space)
        total: Number = Fraction(0)
        for atom in self.atoms:
            if subset.contains(atom.at):
                total += atom.mass
        for interval, poly in self.segments:
            overlap = RealSet.from_interval(self.space, interval).intersection(subset)
            for component in overlap.intervals:
                total += poly.integral(component.lo, component.hi)
        directions: List[DivergentIntegralError] = []
        for rule in self.discrete:
            part = rule.support.intersection(subset)
            try:
                total += discrete_series(part, rule.poly, rule.base)
            except DivergentMassError as exc:
                directions.append(exc)
        if directions:
            if len({exc.direction for exc in directions}) > 1:
                raise IntegrationError("Дискретные части расходятся к ∞ разных знаков")
            raise directions[0]
        return total

    def total_mass(self) -> Number:
        return self.mass(self.space.whole())

    def is_probability(self, tol: Optional[float] = None) -> bool:
        total = self.total_mass()
        if is_exact(total):
            return total == 1
        tol = get_config().FLOAT_TOLERANCE if tol is None else tol
        return abs(float(total) - 1.0) <= tol

    # Линейные операции

    def _rebuild(self, atoms, pieces, discrete, cls=None):
        return (cls or type(self))(self.space, tuple(atoms), tuple(pieces), tuple(discrete))

    def restrict(self, subset: BorelSet):
        """Сужение ν|_A: restrict(A).mass(B) = mass(A ∩ B)."""
        if subset.space != self.space:
            raise SpaceMismatchError(self.space, subset.space)
        atoms = [a for a in self.atoms if subset.contains(a.at)]
        pieces = []
        for piece in self.pieces:
            overlap = RealSet.from_interval(self.space, piece.interval).intersection(subset)
            pieces.extend(Piece(component, piece.density) for component in overlap.intervals)
        discrete = [rule.restrict(subset) for rule in self.discrete]
        return self._rebuild(atoms, pieces, discrete)

    def scale(self, factor: Number):
        factor = exact(factor)
        atoms = [Atom(a.at, a.mass * factor) for a in self.atoms]
        pieces = [Piece(p.interval, p.density.scale(factor)) for p in self.pieces]
        discrete = [rule.scale(factor) for rule in self.discrete]
        return self._rebuild(atoms, pieces, discrete)

    def add(self, other: "SignedMeasure"):
        self._check_same_space(other)
        cls = Measure if isinstance(self, Measure) and isinstance(other, Measure) else SignedMeasure
        return self._rebuild(self.atoms + other.atoms, self.pieces + other.pieces,
                             self.discrete + other.discrete, cls)

    def negate(self) -> "SignedMeasure":
        return SignedMeasure(self.space, self.atoms, self.pieces, self.discrete).scale(-1)

    def difference(self, other: "SignedMeasure") -> "SignedMeasure":
        self._check_same_space(other)
        negative = other.negate()
        return SignedMeasure(self.space, self.atoms + negative.atoms, self.pieces + negative.pieces,
                             self.discrete + negative.discrete)

    def _check_same_space(self, other: "SignedMeasure") -> None:
        if self.space != other.space:
            raise SpaceMismatchError(self.space, other.space)

    def __add__(self, other):
        return self.add(other)

    def __sub__(self, other):
        return self.difference(other)

    def __str__(self) -> str:
        parts = [f"{format_number(a.mass)}·δ_{format_number(a.at)}" for a in self.atoms]
        parts += [f"[{p.density.kind.value} {p.density.params()} на {p.interval}]" for p in self.pieces]
        parts += [f"[{rule.kind.value} {rule.describe()}]" for rule in self.discrete]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Measure(SignedMeasure):
    """Неотрицательная мера: все атомы, плотности и коэффициенты правил неотрицательны."""

    def __post_init__(self):
        super().__post_init__()
        for atom in self.atoms:
            if atom.mass < 0:
                raise PreconditionError(f"Отрицательная масса атома {format_number(atom.mass)} в {format_number(atom.at)}")
        for interval, poly in self.segments:
            if not poly.is_nonnegative_on(interval.lo, interval.hi):
                raise PreconditionError(f"Плотность {poly} принимает отрицательные значения на {interval}")
        for rule in self.discrete:
            if rule.coefficient < 0:
                raise PreconditionError(f"Отрицательный коэффициент правила {rule.describe()}")

    def scale(self, factor: Number) -> "Measure":
        if factor < 0:
            raise PreconditionError(f"Мера масштабируется только неотрицательным множителем, получено {factor}")
        return super().scale(factor)


def counting_measure(space: Space, support: NatSet, coefficient: Number = 1) -> Measure:
    """Считающая мера (с весом coefficient) на support."""
    return Measure(space, discrete=(DiscreteRule(RuleKind.COUNTING, exact(coefficient), support),))
