"""
Пространства и борелевские множества.

RealSet: конечное объединение интервалов с флагами концов и изолированных точек
внутри области RealLine. NatSet: финально периодическое подмножество ℕ = {1, 2, ...}
(периодический шаблон по модулю q, исправленный конечным множеством исключений),
что покрывает конечные, коконечные множества и чётные числа.
"""
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from core.numbers import INF, Number, exact, format_number
from utils.enums import SpaceKind
from utils.exceptions import DomainError, SpaceMismatchError, UnsupportedMetricError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Interval:
    """Интервал с открытыми/замкнутыми концами; бесконечные концы всегда открыты."""

    lo: Number
    hi: Number
    lo_closed: bool = False
    hi_closed: bool = False

    @classmethod
    def make(cls, lo: Number, hi: Number, lo_closed: bool = False, hi_closed: bool = False) -> "Interval":
        lo, hi = exact(lo), exact(hi)
        return cls(lo, hi, lo_closed and lo != -INF, hi_closed and hi != INF)

    @classmethod
    def point(cls, x: Number) -> "Interval":
        x = exact(x)
        return cls(x, x, True, True)

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed))

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi and self.lo_closed and self.hi_closed

    @property
    def is_bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    @property
    def length(self) -> Number:
        return self.hi - self.lo

    def contains(self, x: Number) -> bool:
        above = self.lo < x or (self.lo_closed and x == self.lo)
        below = x < self.hi or (self.hi_closed and x == self.hi)
        return above and below

    def contains_interval(self, other: "Interval") -> bool:
        if other.is_empty:
            return True
        left = self.lo < other.lo or (self.lo == other.lo and (self.lo_closed or not other.lo_closed))
        right = other.hi < self.hi or (self.hi == other.hi and (self.hi_closed or not other.hi_closed))
        return left and right

    def intersect(self, other: "Interval") -> "Interval":
        if self.lo > other.lo:
            lo, lo_closed = self.lo, self.lo_closed
        elif other.lo > self.lo:
            lo, lo_closed = other.lo, other.lo_closed
        else:
            lo, lo_closed = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hi_closed = self.hi, self.hi_closed
        elif other.hi < self.hi:
            hi, hi_closed = other.hi, other.hi_closed
        else:
            hi, hi_closed = self.hi, self.hi_closed and other.hi_closed
        return Interval(lo, hi, lo_closed, hi_closed)

    def closed_in_line(self) -> "Interval":
        return Interval.make(self.lo, self.hi, True, True)

    def distance(self, x: Number) -> Number:
        if x < self.lo:
            return self.lo - x
        if x > self.hi:
            return x - self.hi
        return Fraction(0) if not isinstance(x, float) else 0.0

    def __str__(self) -> str:
        if self.is_point:
            return "{" + format_number(self.lo) + "}"
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{format_number(self.lo)},{format_number(self.hi)}{right}"


@dataclass(frozen=True)
class Space:
    """Пространство одного из трёх видов."""

    kind: SpaceKind
    domain: Optional[Interval] = None

    @classmethod
    def real_line(cls, lo: Number = -INF, hi: Number = INF,
                  lo_closed: bool = False, hi_closed: bool = False) -> "Space":
        domain = Interval.make(lo, hi, lo_closed, hi_closed)
        if domain.is_empty or domain.is_point:
            raise DomainError(f"Область RealLine должна быть невырожденным интервалом: {domain}")
        return cls(SpaceKind.REAL_LINE, domain)

    @classmethod
    def discrete_nat(cls) -> "Space":
        return cls(SpaceKind.DISCRETE_NAT)

    @classmethod
    def cofinite_nat(cls) -> "Space":
        return cls(SpaceKind.COFINITE_NAT)

    @property
    def is_metric(self) -> bool:
        return self.kind != SpaceKind.COFINITE_NAT

    @property
    def is_natural(self) -> bool:
        return self.kind != SpaceKind.REAL_LINE

    @property
    def is_heine_borel(self) -> bool:
        """Полное пространство Гейне-Бореля: область RealLine замкнута в ℝ, DiscreteNat с метрикой |m - n|."""
        if self.kind != SpaceKind.REAL_LINE:
            return self.kind == SpaceKind.DISCRETE_NAT
        return self.domain.closed_in_line() == self.domain

    def whole(self) -> "BorelSet":
        if self.kind == SpaceKind.REAL_LINE:
            return RealSet.build(self, [self.domain])
        return NatSet.build(self, period=1, residues=[0])

    def empty(self) -> "BorelSet":
        if self.kind == SpaceKind.REAL_LINE:
            return RealSet(self, (), ())
        return NatSet(self, 1, (), ())

    def require_metric(self, operation: str) -> None:
        if not self.is_metric:
            raise UnsupportedMetricError(f"Операция '{operation}' требует метрики, а {self} неметризуемо")

    def __str__(self) -> str:
        if self.kind == SpaceKind.REAL_LINE:
            return f"real_line{self.domain}"
        return self.kind.value


class BorelSet(ABC):
    """Общий интерфейс борелевских множеств всех видов пространств."""

    space: Space

    @abstractmethod
    def contains(self, x: Number) -> bool:
        ...

    @abstractmethod
    def union(self, other: "BorelSet") -> "BorelSet":
        ...

    @abstractmethod
    def intersection(self, other: "BorelSet") -> "BorelSet":
        ...

    @abstractmethod
    def complement(self) -> "BorelSet":
        ...

    @abstractmethod
    def closure(self) -> "BorelSet":
        ...

    @abstractmethod
    def interior(self) -> "BorelSet":
        ...

    @abstractmethod
    def is_bounded(self) -> bool:
        ...

    @abstractmethod
    def is_compact(self) -> bool:
        ...

    @abstractmethod
    def distance(self, x: Number) -> Number:
        ...

    @property
    @abstractmethod
    def is_empty(self) -> bool:
        ...

    def difference(self, other: "BorelSet") -> "BorelSet":
        return self.intersection(other.complement())

    def boundary(self) -> "BorelSet":
        return self.closure().difference(self.interior())

    def is_open(self) -> bool:
        return self.interior() == self

    def is_closed(self) -> bool:
        return self.closure() == self

    def is_whole(self) -> bool:
        return self.complement().is_empty

    def _check_space(self, other: "BorelSet") -> None:
        if self.space != other.space:
            raise SpaceMismatchError(self.space, other.space)

    def __contains__(self, x: Number) -> bool:
        return self.contains(x)

    def __or__(self, other: "BorelSet") -> "BorelSet":
        return self.union(other)

    def __and__(self, other: "BorelSet") -> "BorelSet":
        return self.intersection(other)

    def __sub__(self, other: "BorelSet") -> "BorelSet":
        return self.difference(other)

    def __invert__(self) -> "BorelSet":
        return self.complement()


@dataclass(frozen=True)
class RealSet(BorelSet):
    """Каноническое объединение интервалов и изолированных точек на RealLine."""

    space: Space
    intervals: Tuple[Interval, ...]
    points: Tuple[Number, ...]

    @classmethod
    def build(cls, space: Space, intervals: Iterable[Interval] = (), points: Iterable[Number] = (),
              clip: bool = False) -> "RealSet":
        """
        Канонизация произвольного набора компонент.

        Args:
            space: Пространство вида RealLine
            intervals: Интервалы (возможно пересекающиеся или вырожденные)
            points: Изолированные точки
            clip: Обрезать компоненты по области вместо ошибки

        Returns:
            RealSet: Каноническая форма с тем же предикатом принадлежности

        Raises:
            DomainError: Компонента выходит за область пространства
        """
        if space.kind != SpaceKind.REAL_LINE:
            raise DomainError(f"RealSet требует пространство RealLine, получено {space}")
        domain = space.domain
        components: List[Interval] = []
        for raw in list(intervals) + [Interval.point(p) for p in points]:
            component = Interval.make(raw.lo, raw.hi, raw.lo_closed, raw.hi_closed)
            if component.is_empty:
                continue
            if not domain.contains_interval(component):
                if not clip:
                    raise DomainError(f"Компонента {component} лежит вне области {domain}")
                component = component.intersect(domain)
                if component.is_empty:
                    continue
            components.append(component)
        return cls._from_components(space, components)

    @classmethod
    def _from_components(cls, space: Space, components: List[Interval]) -> "RealSet":
        components.sort(key=lambda c: (c.lo, not c.lo_closed))
        merged: List[Interval] = []
        for current in components:
            if merged and _touches(merged[-1], current):
                last = merged[-1]
                if current.hi > last.hi:
                    hi, hi_closed = current.hi, current.hi_closed
                elif current.hi == last.hi:
                    hi, hi_closed = last.hi, last.hi_closed or current.hi_closed
                else:
                    hi, hi_closed = last.hi, last.hi_closed
                merged[-1] = Interval(last.lo, hi, last.lo_closed, hi_closed)
            else:
                merged.append(current)
        intervals = tuple(c for c in merged if not c.is_point)
        points = tuple(c.lo for c in merged if c.is_point)
        return cls(space, intervals, points)

    @classmethod
    def from_interval(cls, space: Space, interval: Interval, clip: bool = True) -> "RealSet":
        return cls.build(space, [interval], clip=clip)

    def components(self) -> List[Interval]:
        """Все компоненты по возрастанию, точки как вырожденные отрезки."""
        items = list(self.intervals) + [Interval.point(p) for p in self.points]
        items.sort(key=lambda c: (c.lo, c.hi))
        return items

    @property
    def is_empty(self) -> bool:
        return not self.intervals and not self.points

    def breakpoints(self) -> List[Number]:
        values = set()
        for component in self.components():
            for end in (component.lo, component.hi):
                if math.isfinite(end):
                    values.add(end)
        return sorted(values)

    def contains(self, x: Number) -> bool:
        return any(c.contains(x) for c in self.components())

    def union(self, other: "BorelSet") -> "RealSet":
        self._check_space(other)
        return RealSet._from_components(self.space, self.components() + other.components())

    def intersection(self, other: "BorelSet") -> "RealSet":
        self._check_space(other)
        pieces = []
        for a in self.components():
            for b in other.components():
                piece = a.intersect(b)
                if not piece.is_empty:
                    pieces.append(piece)
        return RealSet._from_components(self.space, pieces)

    def complement(self) -> "RealSet":
        domain = self.space.domain
        gaps: List[Interval] = []
        cursor, cursor_closed = domain.lo, domain.lo_closed
        for component in self.components():
            gaps.append(Interval(cursor, component.lo, cursor_closed, not component.lo_closed))
            cursor, cursor_closed = component.hi, not component.hi_closed
        gaps.append(Interval(cursor, domain.hi, cursor_closed, domain.hi_closed))
        return RealSet._from_components(self.space, [g for g in gaps if not g.is_empty])

    def closure_in_line(self) -> List[Interval]:
        return [c.closed_in_line() for c in self.components()]

    def closure(self) -> "RealSet":
        return RealSet.build(self.space, self.closure_in_line(), clip=True)

    def interior(self) -> "RealSet":
        return self.complement().closure().complement()

    def is_bounded(self) -> bool:
        return all(c.is_bounded for c in self.components())

    def is_compact(self) -> bool:
        """Ограничено и замкнуто в ℝ (а не только в области)."""
        return self.is_bounded() and all(c.lo_closed and c.hi_closed for c in self.components())

    def distance(self, x: Number) -> Number:
        if self.is_empty:
            return INF
        return min(c.distance(x) for c in self.components())

    def infimum(self) -> Number:
        return self.components()[0].lo if not self.is_empty else INF

    def supremum(self) -> Number:
        return max(c.hi for c in self.components()) if not self.is_empty else -INF

    def __str__(self) -> str:
        if self.is_empty:
            return "{}"
        return " u ".join(str(c) for c in self.components())


def _touches(left: Interval, right: Interval) -> bool:
    return right.lo < left.hi or (right.lo == left.hi and (left.hi_closed or right.lo_closed))


@dataclass(frozen=True)
class NatSet(BorelSet):
    """
    Финально периодическое подмножество ℕ.

    Принадлежность: (n mod period ∈ residues) XOR (n ∈ exceptions).
    Период минимален, поэтому представление однозначно.
    """

    space: Space
    period: int
    residues: Tuple[int, ...]
    exceptions: Tuple[int, ...]

    @classmethod
    def build(cls, space: Space, period: int = 1, residues: Iterable[int] = (),
              exceptions: Iterable[int] = ()) -> "NatSet":
        """
        Канонизация набора (период, вычеты, исключения).

        Args:
            space: Пространство DiscreteNat или CofiniteNat
            period: Период шаблона q ≥ 1
            residues: Вычеты по модулю q, входящие в шаблон
            exceptions: Натуральные числа, принадлежность которых инвертирована

        Raises:
            DomainError: Число вне ℕ или пространство не натуральное
        """
        if not space.is_natural:
            raise DomainError(f"NatSet требует натуральное пространство, получено {space}")
        if period < 1:
            raise DomainError(f"Период должен быть положительным: {period}")
        pattern = {int(r) % period for r in residues}
        flipped = set()
        for n in exceptions:
            value = _natural(n)
            flipped ^= {value}
        period, pattern = _minimal_period(period, pattern)
        return cls(space, period, tuple(sorted(pattern)), tuple(sorted(flipped)))

    @classmethod
    def finite(cls, space: Space, elements: Iterable[int]) -> "NatSet":
        return cls.build(space, 1, (), set(_natural(n) for n in elements))

    @classmethod
    def cofinite(cls, space: Space, missing: Iterable[int]) -> "NatSet":
        return cls.build(space, 1, (0,), set(_natural(n) for n in missing))

    @classmethod
    def tail(cls, space: Space, start: int) -> "NatSet":
        """{start, start+1, ...}"""
        return cls.cofinite(space, range(1, max(int(start), 1)))

    @classmethod
    def residue_class(cls, space: Space, period: int, residues: Iterable[int]) -> "NatSet":
        return cls.build(space, period, residues)

    def in_pattern(self, n: int) -> bool:
        return n % self.period in self.residues

    def contains(self, x: Number) -> bool:
        if isinstance(x, float):
            if not x.is_integer():
                return False
            x = int(x)
        x = Fraction(x)
        if x.denominator != 1 or x < 1:
            return False
        n = int(x)
        return self.in_pattern(n) != (n in self.exceptions)

    @property
    def is_empty(self) -> bool:
        return not self.residues and not self.exceptions

    @property
    def is_finite(self) -> bool:
        return not self.residues

    @property
    def is_cofinite(self) -> bool:
        return len(self.residues) == self.period

    @property
    def horizon(self) -> int:
        """Граница, начиная с которой множество совпадает со своим шаблоном."""
        return max(self.exceptions, default=0) + 1

    def elements(self, limit: int) -> List[int]:
        """Элементы, не превосходящие limit."""
        return [n for n in range(1, int(limit) + 1) if self.contains(n)]

    def finite_elements(self) -> List[int]:
        if not self.is_finite:
            raise DomainError(f"Множество {self} бесконечно")
        return list(self.exceptions)

    def iterate(self, start: int = 1) -> Iterator[int]:
        """Элементы по возрастанию, начиная со start (для бесконечных множеств генератор бесконечен)."""
        if self.is_finite:
            yield from (n for n in self.exceptions if n >= start)
            return
        n = max(int(start), 1)
        while True:
            if self.contains(n):
                yield n
            n += 1

    def pattern_residues_from(self, start: int) -> List[int]:
        """Первые элементы шаблона не меньше start по каждому вычету."""
        firsts = []
        for r in self.residues:
            n = start + ((r - start) % self.period)
            firsts.append(n)
        return sorted(firsts)

    def _combine(self, other: "NatSet", op) -> "NatSet":
        self._check_space(other)
        period = math.lcm(self.period, other.period)
        pattern = [r for r in range(period) if op(r % self.period in self.residues,
                                                 r % other.period in other.residues)]
        pattern_set = set(pattern)
        flipped = []
        for n in set(self.exceptions) | set(other.exceptions):
            member = op(self.contains(n), other.contains(n))
            if member != (n % period in pattern_set):
                flipped.append(n)
        return NatSet.build(self.space, period, pattern, flipped)

    def union(self, other: "BorelSet") -> "NatSet":
        return self._combine(other, lambda a, b: a or b)

    def intersection(self, other: "BorelSet") -> "NatSet":
        return self._combine(other, lambda a, b: a and b)

    def complement(self) -> "NatSet":
        pattern = [r for r in range(self.period) if r not in self.residues]
        return NatSet.build(self.space, self.period, pattern, self.exceptions)

    # Топология зависит от вида пространства

    def closure(self) -> "NatSet":
        if self.space.kind == SpaceKind.COFINITE_NAT and not self.is_finite:
            return self.space.whole()
        return self

    def interior(self) -> "NatSet":
        if self.space.kind == SpaceKind.COFINITE_NAT and not self.is_cofinite:
            return self.space.empty()
        return self

    def is_bounded(self) -> bool:
        self.space.require_metric("is_bounded")
        return self.is_finite

    def is_compact(self) -> bool:
        # В коконечной топологии компактно любое подмножество
        if self.space.kind == SpaceKind.COFINITE_NAT:
            return True
        return self.is_finite

    def distance(self, x: Number) -> Number:
        self.space.require_metric("point_set_distance")
        if self.is_empty:
            return INF
        if self.is_finite:
            return min(abs(Fraction(x) - n) for n in self.exceptions)
        anchor = max(1, math.floor(x))
        reach = self.horizon + 2 * self.period + anchor
        candidates = [n for n in range(1, reach + 1) if self.contains(n)]
        return min(abs(Fraction(x) - n) for n in candidates)

    def __str__(self) -> str:
        if self.is_empty:
            return "{}"
        if self.is_finite:
            return _brace(self.exceptions)
        if self.is_cofinite:
            return "co" + _brace(self.exceptions)
        text = f"mod {self.period}" + _brace(self.residues)
        added = [n for n in self.exceptions if not self.in_pattern(n)]
        removed = [n for n in self.exceptions if self.in_pattern(n)]
        if added:
            text += " u " + _brace(added)
        if removed:
            text += " \\ " + _brace(removed)
        return text


def _brace(values: Sequence[int]) -> str:
    return "{" + ",".join(str(v) for v in values) + "}"


def _natural(value) -> int:
    number = Fraction(value)
    if number.denominator != 1 or number < 1:
        raise DomainError(f"Элемент {value} не является натуральным числом")
    return int(number)


def _minimal_period(period: int, pattern: set) -> Tuple[int, FrozenSet[int]]:
    for q in range(1, period + 1):
        if period % q:
            continue
        if all((r in pattern) == ((r % q) in pattern) for r in range(period)):
            return q, frozenset(r for r in pattern if r < q)
    return period, frozenset(pattern)


def canonicalize(space: Space, intervals: Iterable[Interval] = (), points: Iterable[Number] = ()) -> BorelSet:
    """
    Канонизация набора компонент для любого вида пространства.

    На натуральных пространствах интервалы понимаются как множества
    натуральных чисел в них: {3} ∪ [1,2] даёт {1,2,3}.
    """
    if space.kind == SpaceKind.REAL_LINE:
        return RealSet.build(space, intervals, points)
    result = NatSet.finite(space, [_natural(p) for p in points])
    for interval in intervals:
        interval = Interval.make(interval.lo, interval.hi, interval.lo_closed, interval.hi_closed)
        if interval.is_empty:
            continue
        if interval.lo == -INF:
            raise DomainError(f"Компонента {interval} выходит за ℕ")
        start = math.ceil(interval.lo)
        if start == interval.lo and not interval.lo_closed:
            start += 1
        if start < 1:
            raise DomainError(f"Компонента {interval} выходит за ℕ")
        if interval.hi == INF:
            result = result.union(NatSet.tail(space, start))
        else:
            elements = [n for n in range(start, math.floor(interval.hi) + 1) if interval.contains(n)]
            result = result.union(NatSet.finite(space, elements))
    return result


def point_set_distance(x: Number, subset: BorelSet) -> Number:
    """ρ(x, A) = inf по a ∈ A |x - a|; 0 тогда и только тогда, когда x в замыкании A."""
    subset.space.require_metric("point_set_distance")
    return subset.distance(x)
