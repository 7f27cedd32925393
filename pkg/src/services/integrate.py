"""
Интегрирование пробных функций по символьным мерам.

Произведение кусочного многочлена на плотность снова является
обобщённым многочленом, поэтому основной путь точный; выражения вне
этого семейства уходят в адаптивную квадратуру.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import numpy as np

from config import get_config
from core.measure import SignedMeasure, discrete_series
from core.numbers import INF, Number, format_number
from core.poly import Poly
from core.space import NatSet, RealSet
from core.testfn import ExprFunction, FunctionPiece, TestFunction, truncate
from services.quadrature import integrate_adaptive
from utils.enums import IntegralMethod, IntegralStatus
from utils.exceptions import (
    DivergentIntegralError,
    DivergentMassError,
    IntegrationError,
    PreconditionError,
    SpaceMismatchError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntegralResult:
    """
    Значение ∫ f dm.

    Attributes:
        value: Число; ±inf для расходящегося интеграла
        method: closed_form или quadrature (если хотя бы один кусок считался численно)
        error_bound: 0 на точном пути, иначе оценка квадратуры
        status: finite, divergent или inconclusive
        partial_bound: Достигнутая частичная сумма для расходящегося дискретного ряда
    """

    value: Number
    method: IntegralMethod = IntegralMethod.CLOSED_FORM
    error_bound: float = 0.0
    status: IntegralStatus = IntegralStatus.FINITE
    partial_bound: Optional[float] = None

    @property
    def is_finite(self) -> bool:
        return self.status == IntegralStatus.FINITE

    @property
    def is_divergent(self) -> bool:
        return self.status == IntegralStatus.DIVERGENT

    @property
    def direction(self) -> int:
        return int(math.copysign(1, self.value)) if self.is_divergent else 0

    def require_finite(self) -> Number:
        if self.is_divergent:
            raise DivergentIntegralError(self.direction, f"Интеграл расходится к {format_number(self.value)}")
        return self.value

    def describe(self) -> str:
        if self.is_divergent:
            return f"расходится ({format_number(self.value)})"
        text = format_number(self.value)
        if self.status == IntegralStatus.INCONCLUSIVE:
            text += " (неточно)"
        return text


def poly_numpy(poly: Poly, xs: np.ndarray) -> np.ndarray:
    """Векторное значение Poly в плавающей точке."""
    total = np.zeros_like(xs, dtype=float)
    for exponent, coefficient in poly.terms:
        if exponent == 0:
            total = total + float(coefficient)
        else:
            total = total + float(coefficient) * np.power(xs, float(exponent))
    return total


def integrate(f: TestFunction, m: SignedMeasure, tol: Optional[float] = None) -> IntegralResult:
    """
    Интеграл пробной функции по мере.

    Args:
        f: Пробная функция на пространстве меры
        m: Мера или знаковая мера
        tol: Точность квадратуры для кусков вне замкнутого семейства

    Returns:
        IntegralResult: Значение, метод и оценка погрешности; расходимость
        к ±∞ возвращается со статусом divergent

    Raises:
        SpaceMismatchError: Функция задана на другом пространстве
        IntegrationError: Неопределённость ∞ - ∞
    """
    if f.space != m.space:
        raise SpaceMismatchError(f.space, m.space)
    tol = get_config().QUADRATURE_TOLERANCE if tol is None else tol
    total: Number = Fraction(0)
    error = 0.0
    method = IntegralMethod.CLOSED_FORM
    inconclusive = False
    divergences: List[DivergentIntegralError] = []

    for atom in m.atoms:
        value = f(atom.at)
        if value != 0:
            total += value * atom.mass

    for piece in f.pieces:
        if isinstance(piece.region, RealSet):
            for interval, density in m.segments:
                overlap = RealSet.from_interval(m.space, interval).intersection(piece.region)
                for component in overlap.intervals:
                    try:
                        if isinstance(piece.formula, Poly):
                            total += (piece.formula * density).integral(component.lo, component.hi)
                            continue
                        result = integrate_adaptive(
                            lambda xs, g=piece.formula, d=density: g.vectorized(xs) * poly_numpy(d, xs),
                            float(component.lo), float(component.hi), f.breakpoints(), tol)
                    except DivergentIntegralError as exc:
                        divergences.append(exc)
                        continue
                    method = IntegralMethod.QUADRATURE
                    total = float(total) + result.value
                    error += result.error
                    inconclusive = inconclusive or not result.converged
            continue
        for rule in m.discrete:
            try:
                total += _rule_series(piece, rule.support.intersection(piece.region), rule.poly, rule.base)
            except DivergentIntegralError as exc:
                divergences.append(exc)

    if divergences:
        if len({exc.direction for exc in divergences}) > 1:
            raise IntegrationError(f"Интеграл {f.label} по мере {m} содержит ∞ - ∞")
        partial = next((exc.partial_bound for exc in divergences if isinstance(exc, DivergentMassError)), None)
        direction = divergences[0].direction
        logger.debug(f"Интеграл {f.label} расходится к {'+' if direction > 0 else '-'}∞")
        return IntegralResult(direction * INF, method, error, IntegralStatus.DIVERGENT, partial)
    status = IntegralStatus.INCONCLUSIVE if inconclusive else IntegralStatus.FINITE
    return IntegralResult(total, method, error, status)


def _rule_series(piece: FunctionPiece, support: NatSet, weight: Poly, base: Number) -> Number:
    if isinstance(piece.formula, Poly):
        return discrete_series(support, piece.formula * weight, base)
    return _expr_series(piece.formula, support, weight, base)


def _expr_series(formula: ExprFunction, support: NatSet, weight: Poly, base: Number) -> float:
    """Численная сумма Σ g(n)·w(n) для выражений; расходимость по порогу частичной суммы."""
    if support.is_finite:
        return sum(formula(n) * float(weight(n)) * float(base) ** n for n in support.exceptions)
    config = get_config()
    total = 0.0
    count = 0
    for n in support.iterate():
        term = formula(n) * float(weight(n)) * float(base) ** n
        total += term
        count += 1
        if abs(total) > config.DIVERGENCE_THRESHOLD:
            raise DivergentMassError(1 if total > 0 else -1, total, count)
        if count >= config.DIVERGENCE_MAX_TERMS:
            break
    return total


def integrate_truncated(f: TestFunction, m: SignedMeasure, k: Number) -> Number:
    """
    Интеграл усечения ∫ 1_{f<k}·f dm.

    Args:
        f: Неотрицательная функция
        m: Мера
        k: Порог усечения

    Returns:
        Number: Значение, неубывающее по k

    Raises:
        PreconditionError: f принимает отрицательные значения
    """
    if not f.is_nonnegative():
        raise PreconditionError(f"Усечение требует неотрицательной функции: {f.label}")
    if k <= 0:
        return Fraction(0)
    return integrate(truncate(f, k), m).require_finite()
