"""Последовательности мер и именованные конструкторы."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import get_config
from core.density import Constant, Power
from core.measure import Atom, DiscreteRule, Measure, Piece, SignedMeasure
from core.numbers import INF, Number, exact, format_number
from core.space import BorelSet, Interval, NatSet, RealSet, Space
from utils.enums import RuleKind, SpaceKind
from utils.exceptions import PreconditionError, SpaceMismatchError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MeasureSequence:
    """
    Правило n ↦ ν_n с заявленным пределом и сеткой.

    Attributes:
        name: Имя для отчётов
        rule: Конструктор ν_n
        limit: Кандидат в пределы ν
        grid: Строго возрастающая сетка n
        hints: Структурные пробные множества, зависящие от n (например, [n, n+1])
        params: Параметры конструктора для отчётов
    """

    name: str
    rule: Callable[[int], SignedMeasure]
    limit: SignedMeasure
    grid: Tuple[int, ...] = ()
    hints: Optional[Callable[[int], List[BorelSet]]] = None
    params: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        grid = tuple(self.grid) or get_config().default_grid
        if any(a >= b for a, b in zip(grid, grid[1:])) or grid[0] < 1:
            raise PreconditionError(f"Сетка должна строго возрастать и состоять из натуральных чисел: {grid}")
        object.__setattr__(self, "grid", grid)

    @property
    def space(self) -> Space:
        return self.limit.space

    @cached_property
    def measures(self) -> List[Tuple[int, SignedMeasure]]:
        """ν_n на сетке; пространство каждого члена совпадает с пространством предела."""
        result = []
        for n in self.grid:
            term = self.rule(n)
            if term.space != self.limit.space:
                raise SpaceMismatchError(term.space, self.limit.space)
            result.append((n, term))
        return result

    def with_grid(self, grid: Sequence[int]) -> "MeasureSequence":
        return MeasureSequence(self.name, self.rule, self.limit, tuple(grid), self.hints, dict(self.params))

    def structural_sets(self) -> List[BorelSet]:
        """Подсказки на первых точках сетки."""
        if self.hints is None:
            return []
        sets: List[BorelSet] = []
        for n in self.grid[:3]:
            sets.extend(self.hints(n))
        return sets


def interleaved_grid(max_exponent: Optional[int] = None) -> Tuple[int, ...]:
    """Сетка {2^k, 2^k + 1}: в ней есть и чётные, и нечётные n."""
    max_exponent = max_exponent or get_config().GRID_MAX_EXPONENT
    return tuple(sorted({2 ** k for k in range(1, max_exponent + 1)} | {2 ** k + 1 for k in range(1, max_exponent + 1)}))


def half_line() -> Space:
    """X = [1, ∞)."""
    return Space.real_line(1, INF, lo_closed=True)


def _quartic_tail(space: Space, upper: Number) -> Piece:
    return Piece(Interval.make(1, upper, True, upper != INF), Power(Fraction(1), Fraction(-4)))


def escaping_mass(grid: Sequence[int] = ()) -> MeasureSequence:
    """ν_n = x^-4 на [1, n] плюс мера Лебега на [n, n+1]; ν = x^-4 на [1, ∞). Масса 1 уходит на бесконечность."""
    space = half_line()

    def rule(n: int) -> Measure:
        return Measure(space, pieces=(_quartic_tail(space, n), Piece(Interval.make(n, n + 1, True, True), Constant(Fraction(1)))))

    def hints(n: int) -> List[BorelSet]:
        return [RealSet.build(space, [Interval.make(n, n + 1, True, True)]),
                RealSet.build(space, [Interval.make(n, INF, True)])]

    return MeasureSequence("escaping_mass", rule, Measure(space, pieces=(_quartic_tail(space, INF),)), tuple(grid), hints)


def oscillating_block(grid: Sequence[int] = ()) -> MeasureSequence:
    """ν_n = x^-4 на [1, n] плюс c_n·Лебег на [n, n+1], c_n = 1/n² при нечётном n и 2/n² при чётном."""
    space = half_line()

    def rule(n: int) -> Measure:
        c = Fraction(1 if n % 2 else 2, n * n)
        return Measure(space, pieces=(_quartic_tail(space, n), Piece(Interval.make(n, n + 1, True, True), Constant(c))))

    def hints(n: int) -> List[BorelSet]:
        return [RealSet.build(space, [Interval.make(n, n + 1, True, True)])]

    return MeasureSequence("oscillating_block", rule, Measure(space, pieces=(_quartic_tail(space, INF),)),
                           tuple(grid or interleaved_grid()), hints)


def counting_tails(grid: Sequence[int] = ()) -> MeasureSequence:
    """ν_n = считающая мера на {n, n+1, ...} на DiscreteNat; кандидат в пределы: нулевая мера."""
    space = Space.discrete_nat()

    def rule(n: int) -> Measure:
        return Measure(space, discrete=(DiscreteRule(RuleKind.COUNTING, Fraction(1), NatSet.tail(space, n)),))

    def hints(n: int) -> List[BorelSet]:
        return [NatSet.finite(space, [n]), NatSet.tail(space, n)]

    return MeasureSequence("counting_tails", rule, Measure.zero(space), tuple(grid), hints)


def cofinite_atoms(grid: Sequence[int] = ()) -> MeasureSequence:
    """ν_n = ((n-1)/n)·δ_{2n} + (1/n)·δ_1 на CofiniteNat; ν = δ_1."""
    space = Space.cofinite_nat()

    def rule(n: int) -> Measure:
        return Measure(space, atoms=(Atom(2 * n, Fraction(n - 1, n)), Atom(1, Fraction(1, n))))

    def hints(n: int) -> List[BorelSet]:
        return [NatSet.residue_class(space, 2, [0]), NatSet.finite(space, [1]), NatSet.cofinite(space, [1])]

    return MeasureSequence("cofinite_atoms", rule, Measure.dirac(space, 1), tuple(grid), hints)


def restricted_density(grid: Sequence[int] = ()) -> MeasureSequence:
    """ν_n = ν|_[1, n] для ν с плотностью x^-2 на [1, ∞): сходимость по полной вариации, ∫x² dν = ∞."""
    space = half_line()
    density = Power(Fraction(1), Fraction(-2))

    def rule(n: int) -> Measure:
        return Measure(space, pieces=(Piece(Interval.make(1, n, True, True), density),))

    limit = Measure(space, pieces=(Piece(Interval.make(1, INF, True), density),))
    return MeasureSequence("restricted_density", rule, limit, tuple(grid))


def atom_to_boundary(grid: Sequence[int] = ()) -> MeasureSequence:
    """ν_n = δ_{1/n} на (0, 1); масса уходит в невключённый конец, ν = 0."""
    space = Space.real_line(0, 1)

    def rule(n: int) -> Measure:
        return Measure.dirac(space, Fraction(1, n))

    def hints(n: int) -> List[BorelSet]:
        return [RealSet.build(space, [Interval.make(0, Fraction(1, 2))])]

    return MeasureSequence("atom_to_boundary", rule, Measure.zero(space), tuple(grid), hints)


def shifting_atom(space: Space, position: Callable[[int], Number], target: Number, name: str = "shifting_atom",
                  grid: Sequence[int] = ()) -> MeasureSequence:
    """ν_n = δ_{x_n}, кандидат ν = δ_target."""

    def rule(n: int) -> Measure:
        return Measure.dirac(space, position(n))

    def hints(n: int) -> List[BorelSet]:
        return [RealSet.build(space, points=[position(n)])] if space.kind == SpaceKind.REAL_LINE else []

    return MeasureSequence(name, rule, Measure.dirac(space, target), tuple(grid), hints,
                           {"target": format_number(exact(target))})


def mixture(first: Measure, second: Measure, name: str = "mixture", grid: Sequence[int] = ()) -> MeasureSequence:
    """ν_n = (1 - 1/n)·μ + (1/n)·ν → μ по полной вариации."""

    def rule(n: int) -> Measure:
        return first.scale(Fraction(n - 1, n)).add(second.scale(Fraction(1, n)))

    return MeasureSequence(name, rule, first, tuple(grid))


def alternating_atoms(space: Space, a: Number, b: Number, name: str = "alternating_atoms",
                      grid: Sequence[int] = ()) -> MeasureSequence:
    """ν_n = δ_a при нечётном n и δ_b при чётном; кандидат δ_a. Не сходится ни в каком смысле при a ≠ b."""

    def rule(n: int) -> Measure:
        return Measure.dirac(space, a if n % 2 else b)

    return MeasureSequence(name, rule, Measure.dirac(space, a), tuple(grid or interleaved_grid()),
                           lambda n: [RealSet.build(space, points=[a]), RealSet.build(space, points=[b])],
                           {"a": format_number(exact(a)), "b": format_number(exact(b))})


def random_convergent(seed: int, grid: Sequence[int] = ()) -> MeasureSequence:
    """Случайная сходящаяся последовательность на [0, 1]: атом δ_{x + c/n²} или смесь с атомом."""
    rng = np.random.default_rng(seed)
    space = Space.real_line(0, 1, True, True)
    x = Fraction(int(rng.integers(8, 57)), 64)
    logger.debug(f"Случайная сходящаяся последовательность seed={seed}: x = {x}")
    if rng.integers(0, 2):
        c = Fraction(int(rng.integers(-8, 9)) or 1, 128)
        return shifting_atom(space, lambda n: x + c / (n * n), x, f"shifting_atom[{seed}]", grid)
    base = Measure(space, atoms=(Atom(x, Fraction(1, 2)),),
                   pieces=(Piece(Interval.make(0, 1, True, True), Constant(Fraction(1, 2))),))
    other = Measure.dirac(space, Fraction(int(rng.integers(1, 64)), 64))
    return mixture(base, other, f"mixture[{seed}]", grid)


def random_divergent(seed: int, grid: Sequence[int] = ()) -> MeasureSequence:
    """Случайная несходящаяся последовательность: атом прыгает между двумя точками [0, 1]."""
    rng = np.random.default_rng(seed)
    space = Space.real_line(0, 1, True, True)
    a, b = (Fraction(int(v), 64) for v in rng.choice(np.arange(8, 57), size=2, replace=False))
    logger.debug(f"Случайная несходящаяся последовательность seed={seed}: точки {a}, {b}")
    return alternating_atoms(space, a, b, f"alternating_atoms[{seed}]", grid)


NAMED: Dict[str, Callable[..., MeasureSequence]] = {
    "escaping_mass": escaping_mass,
    "oscillating_block": oscillating_block,
    "counting_tails": counting_tails,
    "cofinite_atoms": cofinite_atoms,
    "restricted_density": restricted_density,
    "atom_to_boundary": atom_to_boundary,
}
