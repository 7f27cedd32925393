"""
Обобщённые многочлены Σ c·x^p с рациональными показателями.

Замкнуты относительно сложения, умножения и взятия первообразной
(показатель -1 даёт логарифм), поэтому на них держится точное
интегрирование плотностей и кусочных пробных функций.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
import sympy

from core.numbers import INF, Number, exact, format_number, is_exact, power, sign
from utils.exceptions import DivergentIntegralError, IntegrationError

logger = logging.getLogger(__name__)

Term = Tuple[Fraction, Number]


@dataclass(frozen=True)
class Poly:
    """Сумма одночленов; terms упорядочены по возрастанию показателя, нулевые коэффициенты отброшены."""

    terms: Tuple[Term, ...] = ()

    @classmethod
    def from_dict(cls, coefficients: Dict[Fraction, Number]) -> "Poly":
        cleaned = []
        for exponent, coefficient in coefficients.items():
            if coefficient == 0:
                continue
            cleaned.append((Fraction(exponent), exact(coefficient)))
        cleaned.sort(key=lambda term: term[0])
        return cls(tuple(cleaned))

    @classmethod
    def const(cls, value: Number) -> "Poly":
        return cls.from_dict({Fraction(0): value})

    @classmethod
    def monomial(cls, coefficient: Number, exponent) -> "Poly":
        return cls.from_dict({Fraction(exponent): coefficient})

    @classmethod
    def from_coefficients(cls, coefficients: Iterable[Number]) -> "Poly":
        """Многочлен a_0 + a_1 x + ... по списку коэффициентов."""
        return cls.from_dict({Fraction(k): c for k, c in enumerate(coefficients)})

    @classmethod
    def linear_through(cls, x0: Number, y0: Number, x1: Number, y1: Number) -> "Poly":
        """Прямая через две точки (x0 != x1)."""
        slope = (y1 - y0) / (x1 - x0)
        return cls.from_dict({Fraction(1): slope, Fraction(0): y0 - slope * x0})

    @classmethod
    def from_expr(cls, expr, symbol) -> Optional["Poly"]:
        """
        Перевод выражения sympy в Poly.

        Args:
            expr: Выражение sympy
            symbol: Переменная

        Returns:
            Optional[Poly]: None, если выражение не является суммой c·x^p
        """
        expanded = sympy.expand(sympy.sympify(expr))
        coefficients: Dict[Fraction, Number] = {}
        for term in sympy.Add.make_args(expanded):
            coefficient, exponent = term.as_coeff_exponent(symbol)
            if coefficient.free_symbols or not exponent.is_Rational:
                return None
            if symbol in (term / symbol ** exponent).free_symbols:
                return None
            key = Fraction(int(exponent.p), int(exponent.q))
            value = _sympy_number(coefficient)
            if value is None:
                return None
            coefficients[key] = coefficients.get(key, Fraction(0)) + value
        return cls.from_dict(coefficients)

    # Свойства

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(exponent == 0 for exponent, _ in self.terms)

    @property
    def constant_value(self) -> Number:
        for exponent, coefficient in self.terms:
            if exponent == 0:
                return coefficient
        return Fraction(0)

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for _, c in self.terms)

    @property
    def lowest(self) -> Optional[Term]:
        return self.terms[0] if self.terms else None

    @property
    def highest(self) -> Optional[Term]:
        return self.terms[-1] if self.terms else None

    @property
    def integer_exponents(self) -> bool:
        return all(exponent.denominator == 1 for exponent, _ in self.terms)

    @property
    def singular_at_zero(self) -> bool:
        return bool(self.terms) and self.terms[0][0] < 0

    @property
    def degree(self) -> Fraction:
        return self.terms[-1][0] if self.terms else Fraction(0)

    # Арифметика

    def __call__(self, x: Number) -> Number:
        total: Number = Fraction(0)
        for exponent, coefficient in self.terms:
            total += coefficient * power(x, exponent)
        return total

    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other)
        coefficients: Dict[Fraction, Number] = dict(self.terms)
        for exponent, coefficient in other.terms:
            coefficients[exponent] = coefficients.get(exponent, Fraction(0)) + coefficient
        return Poly.from_dict(coefficients)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return Poly.from_dict({e: c * other for e, c in self.terms})
        coefficients: Dict[Fraction, Number] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                coefficients[e1 + e2] = coefficients.get(e1 + e2, Fraction(0)) + c1 * c2
        return Poly.from_dict(coefficients)

    __rmul__ = __mul__

    def derivative(self) -> "Poly":
        return Poly.from_dict({e - 1: c * e for e, c in self.terms if e != 0})

    # Интегрирование

    def integral(self, a: Number, b: Number) -> Number:
        """
        Определённый интеграл по (a, b), концы могут быть бесконечными.

        Args:
            a: Левый конец
            b: Правый конец

        Returns:
            Number: Точное значение на рациональном пути

        Raises:
            DivergentIntegralError: Интеграл расходится к ±∞
            IntegrationError: Расходимости разных знаков (∞ - ∞)
        """
        if a == b or self.is_zero:
            return Fraction(0)
        if a > b:
            return -self.integral(b, a)
        if self.singular_at_zero and a < 0 < b:
            return _combine_halves(lambda: self._integral_one_side(a, 0),
                                   lambda: self._integral_one_side(0, b))
        return self._integral_one_side(a, b)

    def _integral_one_side(self, a: Number, b: Number) -> Number:
        # 0 не лежит строго внутри (a, b)
        if not self.integer_exponents and a < 0:
            raise IntegrationError(f"Дробная степень на отрицательной полуоси: {self} на ({a}, {b})")
        directions = []
        top_exponent, top_coefficient = self.terms[-1]
        low_exponent, low_coefficient = self.terms[0]
        if b == INF and top_exponent >= -1:
            directions.append(sign(top_coefficient))
        if a == -INF and top_exponent >= -1:
            directions.append(sign(top_coefficient) * _parity(top_exponent))
        if a == 0 and low_exponent <= -1:
            directions.append(sign(low_coefficient))
        if b == 0 and low_exponent <= -1:
            directions.append(sign(low_coefficient) * _parity(low_exponent))
        if directions:
            if len(set(directions)) > 1:
                raise IntegrationError(f"Неопределённость ∞ - ∞ при интегрировании {self} по ({a}, {b})")
            raise DivergentIntegralError(directions[0])
        total: Number = Fraction(0)
        for exponent, coefficient in self.terms:
            total += coefficient * (_primitive(exponent, b) - _primitive(exponent, a))
        return total

    # Корни и знаки

    def roots(self, a: Number = -INF, b: Number = INF) -> List[Number]:
        """
        Вещественные корни строго внутри (a, b), по возрастанию.

        Замена t = x^(1/d), где d есть общий знаменатель показателей, сводит
        задачу к обычному многочлену; корни ищет sympy на точном пути
        и numpy.roots на приближённом.
        """
        if self.is_zero or self.is_constant:
            return []
        d = math.lcm(*(e.denominator for e, _ in self.terms))
        if d > 1:
            a = max(a, 0)
        scaled = [(int(e * d), c) for e, c in self.terms]
        shift = min(k for k, _ in scaled)
        degree = max(k for k, _ in scaled) - shift
        coefficients = [Fraction(0)] * (degree + 1)
        for k, c in scaled:
            coefficients[k - shift] = c
        candidates: List[Number] = []
        if shift > 0:
            candidates.append(Fraction(0))
        for t in _polynomial_roots(coefficients):
            if d == 1:
                candidates.append(t)
            elif t > 0:
                candidates.append(t ** d if is_exact(t) else float(t) ** d)
        found = sorted({x for x in candidates if a < x < b})
        return found

    def critical_points(self, a: Number = -INF, b: Number = INF) -> List[Number]:
        """Корни и особая точка 0 внутри (a, b): между ними знак постоянен."""
        points = set(self.roots(a, b))
        if self.singular_at_zero and a < 0 < b:
            points.add(Fraction(0))
        return sorted(points)

    def sign_pattern(self, a: Number, b: Number) -> List[Tuple[Number, Number, int]]:
        """Разбиение (a, b) на участки постоянного знака."""
        cuts = [a] + self.critical_points(a, b) + [b]
        return [(lo, hi, sign(self(sample_point(lo, hi)))) for lo, hi in zip(cuts, cuts[1:])]

    def is_nonnegative_on(self, a: Number, b: Number) -> bool:
        if a == b:
            return self(a) >= 0
        return all(s >= 0 for _, _, s in self.sign_pattern(a, b))

    def sup_abs(self, a: Number, b: Number) -> Number:
        """Точная верхняя грань |f| на (a, b)."""
        if self.is_zero:
            return Fraction(0)
        if self.singular_at_zero and a <= 0 <= b:
            return INF
        candidates = [abs(self._limit(a)), abs(self._limit(b))]
        candidates.extend(abs(self(x)) for x in self.derivative().roots(a, b))
        return max(candidates)

    def _limit(self, x: Number) -> Number:
        if math.isfinite(x):
            return self(x)
        exponent, coefficient = self.terms[-1]
        if exponent < 0:
            return Fraction(0)
        if exponent == 0:
            return coefficient
        direction = sign(coefficient) * (1 if x > 0 else _parity(exponent))
        return direction * INF

    # Представление

    def to_expr(self, variable: str = "x") -> str:
        """Запись, разбираемая обратно sympy."""
        if self.is_zero:
            return "0"
        parts = []
        for exponent, coefficient in reversed(self.terms):
            c = format_number(coefficient)
            if exponent == 0:
                parts.append(f"({c})")
            elif exponent == 1:
                parts.append(f"({c})*{variable}")
            else:
                parts.append(f"({c})*{variable}**({format_number(exponent)})")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.to_expr()


def sample_point(lo: Number, hi: Number) -> Number:
    """Внутренняя точка интервала (lo, hi) с возможно бесконечными концами."""
    if lo == -INF and hi == INF:
        return Fraction(0)
    if lo == -INF:
        return hi - 1
    if hi == INF:
        return lo + 1
    return (lo + hi) / 2


def _parity(exponent: Fraction) -> int:
    """Знак x^p при x < 0 для целого p."""
    return -1 if int(exponent) % 2 else 1


def _primitive(exponent: Fraction, x: Number) -> Number:
    # Вызывается только там, где интеграл сходится
    if exponent == -1:
        return math.log(abs(x))
    if math.isinf(x) or (x == 0 and exponent + 1 > 0):
        return Fraction(0)
    return power(x, exponent + 1) / (exponent + 1)


def _combine_halves(left, right) -> Number:
    values = []
    directions = []
    for part in (left, right):
        try:
            values.append(part())
        except DivergentIntegralError as exc:
            directions.append(exc.direction)
    if directions:
        if len(set(directions)) > 1:
            raise IntegrationError("Неопределённость ∞ - ∞ в особой точке 0")
        raise DivergentIntegralError(directions[0])
    return values[0] + values[1]


def _sympy_number(value) -> Optional[Number]:
    if value.is_Rational:
        return Fraction(int(value.p), int(value.q))
    if value.is_real and value.is_number:
        return float(value)
    return None


def _polynomial_roots(coefficients: List[Number]) -> List[Number]:
    """Вещественные корни Σ coefficients[k] t^k."""
    while coefficients and coefficients[-1] == 0:
        coefficients = coefficients[:-1]
    degree = len(coefficients) - 1
    if degree <= 0:
        return []
    if degree == 1:
        return [-coefficients[0] / coefficients[1]]
    if all(is_exact(c) for c in coefficients):
        t = sympy.Symbol("t")
        expr = sum(sympy.Rational(c.numerator, c.denominator) * t ** k
                   for k, c in enumerate(map(Fraction, coefficients)))
        result: List[Number] = []
        for root in sympy.Poly(expr, t).real_roots():
            if root.is_Rational:
                result.append(Fraction(int(root.p), int(root.q)))
            else:
                result.append(float(root.evalf(30)))
        return result
    raw = np.roots([float(c) for c in reversed(coefficients)])
    real = [float(r.real) for r in raw if abs(r.imag) <= 1e-9 * max(1.0, abs(r))]
    logger.debug(f"Корни многочлена степени {degree} найдены численно: {real}")
    return real
