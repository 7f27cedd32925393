"""Адаптивная квадратура Гаусса-Кронрода (G7/K15) с учётом точек излома."""
import heapq
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from config import get_config

logger = logging.getLogger(__name__)

# узлы K15 на [-1, 1] и веса: Гаусс (только на узлах G7), Кронрод
_NODES = np.array([
    -0.991455371120812639, -0.949107912342758525, -0.864864423359769073, -0.741531185599394440,
    -0.586087235467691130, -0.405845151377397167, -0.207784955007898468, 0.0,
    0.207784955007898468, 0.405845151377397167, 0.586087235467691130, 0.741531185599394440,
    0.864864423359769073, 0.949107912342758525, 0.991455371120812639,
])
_GAUSS = np.array([
    0.0, 0.129484966168869693, 0.0, 0.279705391489276668, 0.0, 0.381830050505118945, 0.0,
    0.417959183673469388, 0.0, 0.381830050505118945, 0.0, 0.279705391489276668, 0.0,
    0.129484966168869693, 0.0,
])
_KRONROD = np.array([
    0.022935322010529225, 0.063092092629978553, 0.104790010322250184, 0.140653259715525919,
    0.169004726639267903, 0.190350578064785410, 0.204432940075298892, 0.209482141084727828,
    0.204432940075298892, 0.190350578064785410, 0.169004726639267903, 0.140653259715525919,
    0.104790010322250184, 0.063092092629978553, 0.022935322010529225,
])


@dataclass(frozen=True)
class QuadratureResult:
    """
    Результат адаптивной квадратуры.

    Attributes:
        value: Оценка интеграла (K15)
        error: Сумма оценок погрешности по подотрезкам
        subintervals: Число подотрезков на момент остановки
        converged: Достигнута ли заданная точность
    """

    value: float
    error: float
    subintervals: int
    converged: bool


def _rule(f: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> Tuple[float, float]:
    half = (b - a) / 2
    values = f(half * (_NODES + 1) + a)
    kronrod = half * float(np.dot(_KRONROD, values))
    gauss = half * float(np.dot(_GAUSS, values))
    return kronrod, abs(kronrod - gauss)


def _finite_map(f: Callable[[np.ndarray], np.ndarray], a: float, b: float):
    """Замена переменной, сводящая бесконечный конец к отрезку [0, 1]."""
    if math.isfinite(a) and math.isfinite(b):
        return f, a, b
    if math.isfinite(a):
        def mapped(t):
            return f(a + t / (1 - t)) / (1 - t) ** 2
        return mapped, 0.0, 1.0
    if math.isfinite(b):
        def mapped(t):
            return f(b - t / (1 - t)) / (1 - t) ** 2
        return mapped, 0.0, 1.0
    raise ValueError("Оба конца бесконечны: разбейте интервал в конечной точке")


def integrate_adaptive(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                       breakpoints: Sequence[float] = (), tol: Optional[float] = None,
                       max_subintervals: Optional[int] = None) -> QuadratureResult:
    """
    Интеграл векторизованной функции по (a, b).

    Сначала интервал режется по всем точкам излома, затем подотрезок с
    наибольшей оценкой погрешности делится пополам, пока суммарная
    погрешность не станет меньше tol или не будет исчерпан лимит.

    Args:
        f: Векторизованная функция numpy
        a: Левый конец (может быть -inf)
        b: Правый конец (может быть inf)
        breakpoints: Точки излома подынтегральной функции
        tol: Абсолютная точность
        max_subintervals: Лимит числа подотрезков

    Returns:
        QuadratureResult: Значение, погрешность и признак сходимости
    """
    config = get_config()
    tol = config.QUADRATURE_TOLERANCE if tol is None else tol
    max_subintervals = max_subintervals or config.QUADRATURE_MAX_SUBINTERVALS
    if a == b:
        return QuadratureResult(0.0, 0.0, 0, True)
    cuts = sorted({float(p) for p in breakpoints if a < p < b})
    if not math.isfinite(a) and not math.isfinite(b) and not cuts:
        cuts = [0.0]
    bounds = [float(a)] + cuts + [float(b)]

    heap: List[Tuple[float, int, float, float, float, Callable]] = []
    order = itertools.count()
    total, error = 0.0, 0.0
    for lo, hi in zip(bounds, bounds[1:]):
        g, lo_t, hi_t = _finite_map(f, lo, hi)
        value, err = _rule(g, lo_t, hi_t)
        total += value
        error += err
        heapq.heappush(heap, (-err, next(order), lo_t, hi_t, value, g))

    while error > tol and len(heap) < max_subintervals:
        neg_err, _, lo, hi, value, g = heapq.heappop(heap)
        mid = (lo + hi) / 2
        if mid in (lo, hi):
            # отрезок стал неразличим в плавающей точке
            heapq.heappush(heap, (0.0, next(order), lo, hi, value, g))
            error += neg_err
            continue
        left, left_err = _rule(g, lo, mid)
        right, right_err = _rule(g, mid, hi)
        total += left + right - value
        error += left_err + right_err + neg_err
        heapq.heappush(heap, (-left_err, next(order), lo, mid, left, g))
        heapq.heappush(heap, (-right_err, next(order), mid, hi, right, g))

    converged = error <= tol and math.isfinite(total)
    if not converged:
        logger.warning(f"Квадратура не достигла точности {tol:g}: погрешность {error:.3g} на {len(heap)} подотрезках")
    return QuadratureResult(total, error, len(heap), converged)
