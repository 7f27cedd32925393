"""Семейства плотностей в замкнутой форме."""
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Tuple, Union

from core.numbers import Number, exact, format_number
from core.poly import Poly
from core.space import Interval
from utils.enums import DensityKind

Segment = Tuple[Interval, Poly]


@dataclass(frozen=True)
class Constant:
    c: Number

    kind = DensityKind.CONSTANT

    def poly(self) -> Poly:
        return Poly.const(self.c)

    def segments(self, interval: Interval) -> List[Segment]:
        return [(interval, self.poly())] if not interval.is_empty else []

    def scale(self, factor: Number) -> "Constant":
        return Constant(exact(self.c * factor))

    def params(self) -> Dict[str, Any]:
        return {"c": format_number(self.c)}


@dataclass(frozen=True)
class Power:
    """c·x^p"""

    c: Number
    p: Fraction

    kind = DensityKind.POWER

    def poly(self) -> Poly:
        return Poly.monomial(self.c, self.p)

    def segments(self, interval: Interval) -> List[Segment]:
        return [(interval, self.poly())] if not interval.is_empty else []

    def scale(self, factor: Number) -> "Power":
        return Power(exact(self.c * factor), self.p)

    def params(self) -> Dict[str, Any]:
        return {"c": format_number(self.c), "p": format_number(self.p)}


@dataclass(frozen=True)
class Polynomial:
    """Σ coefficients[k]·x^k"""

    coefficients: Tuple[Number, ...]

    kind = DensityKind.POLYNOMIAL

    def poly(self) -> Poly:
        return Poly.from_coefficients(self.coefficients)

    def segments(self, interval: Interval) -> List[Segment]:
        return [(interval, self.poly())] if not interval.is_empty else []

    def scale(self, factor: Number) -> "Polynomial":
        return Polynomial(tuple(exact(c * factor) for c in self.coefficients))

    def params(self) -> Dict[str, Any]:
        return {"coefficients": [format_number(c) for c in self.coefficients]}


@dataclass(frozen=True)
class PiecewiseLinear:
    """Линейная интерполяция по узлам (x, y); вне [x_0, x_m] плотность равна нулю."""

    knots: Tuple[Tuple[Number, Number], ...]

    kind = DensityKind.PIECEWISE_LINEAR

    def segments(self, interval: Interval) -> List[Segment]:
        result: List[Segment] = []
        for (x0, y0), (x1, y1) in zip(self.knots, self.knots[1:]):
            piece = Interval(x0, x1, False, False).intersect(interval)
            if piece.is_empty:
                continue
            result.append((piece, Poly.linear_through(x0, y0, x1, y1)))
        return result

    def scale(self, factor: Number) -> "PiecewiseLinear":
        return PiecewiseLinear(tuple((x, exact(y * factor)) for x, y in self.knots))

    def params(self) -> Dict[str, Any]:
        return {"knots": [[format_number(x), format_number(y)] for x, y in self.knots]}


DensityForm = Union[Constant, Power, Polynomial, PiecewiseLinear]


def make_density(kind: DensityKind, params: Dict[str, Any]) -> DensityForm:
    """
    Сборка плотности по виду и уже разобранным числовым параметрам.

    Args:
        kind: Вид плотности
        params: Параметры (числа уже приведены к Number)

    Returns:
        DensityForm: Плотность
    """
    if kind == DensityKind.CONSTANT:
        return Constant(exact(params["c"]))
    if kind == DensityKind.POWER:
        return Power(exact(params.get("c", 1)), Fraction(params["p"]))
    if kind == DensityKind.POLYNOMIAL:
        return Polynomial(tuple(exact(c) for c in params["coefficients"]))
    if kind == DensityKind.PIECEWISE_LINEAR:
        knots = tuple((exact(x), exact(y)) for x, y in params["knots"])
        if any(a[0] >= b[0] for a, b in zip(knots, knots[1:])):
            raise ValueError("Узлы кусочно-линейной плотности должны строго возрастать")
        return PiecewiseLinear(knots)
    raise ValueError(f"Неизвестный вид плотности: {kind}")
