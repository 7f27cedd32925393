"""
Численные пределы трасс и библиотека пробных множеств.

Вердикт по конечной сетке означает «нарушений не найдено и экстраполяция
устойчива», а не доказательство сходимости.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import get_config
from core.numbers import INF, Number, format_number, is_exact
from core.space import BorelSet, Interval, NatSet, RealSet, Space
from utils.enums import LimitKind, SpaceKind, Verdict

logger = logging.getLogger(__name__)

Trace = List[Tuple[int, Number]]

MIN_POINTS = 6


@dataclass(frozen=True)
class LimitVerdict:
    """
    Характер предела трассы.

    Attributes:
        kind: converges, diverges, oscillates или inconclusive
        value: Предел для converges
        limits: Пределы подпоследовательностей для oscillates
        direction: Знак бесконечности для diverges
        tolerance: Использованная точность
    """

    kind: LimitKind
    value: Optional[Number] = None
    limits: Tuple[Number, ...] = ()
    direction: int = 0
    tolerance: float = 0.0

    def matches(self, target: Number, tol: Optional[float] = None) -> bool:
        """Сходится ли трасса к target в пределах точности."""
        tol = self.tolerance if tol is None else tol
        if self.kind != LimitKind.CONVERGES:
            return False
        if is_exact(self.value) and is_exact(target):
            return abs(self.value - target) <= tol
        return abs(float(self.value) - float(target)) <= tol

    def describe(self) -> str:
        if self.kind == LimitKind.CONVERGES:
            return f"converges({format_number(self.value)})"
        if self.kind == LimitKind.OSCILLATES:
            return "oscillates({" + ", ".join(format_number(v) for v in self.limits) + "})"
        if self.kind == LimitKind.DIVERGES:
            return f"diverges({'+' if self.direction > 0 else '-'}inf)"
        return "inconclusive"


def aitken(values: Sequence[Number]) -> Optional[Number]:
    """
    Δ²-экстраполяция Эйткена по трём последним значениям.

    Точна для геометрически убывающей ошибки; для Fraction остаётся точной.
    None, если разности вырождены или не сжимаются.
    """
    x0, x1, x2 = values[-3:]
    denominator = x2 - 2 * x1 + x0
    if denominator == 0 or x1 == x0:
        return None
    ratio = (x2 - x1) / (x1 - x0)
    if not abs(ratio) < 1:
        return None
    return x2 - (x2 - x1) ** 2 / denominator


def _converges(values: Sequence[Number], tol: float, window: int) -> Optional[Number]:
    """Предел подпоследовательности или None."""
    if len(values) < 3 or any(not math.isfinite(v) for v in values[-window:]):
        return None
    tail = values[-window:]
    if max(tail) - min(tail) <= tol:
        if all(v == tail[-1] for v in tail):
            return tail[-1]
        estimate = aitken([float(v) for v in tail])
        if estimate is not None and abs(estimate - float(tail[-1])) <= tol:
            return estimate
        return tail[-1]
    floats = [float(v) for v in tail]
    estimates = [aitken(floats[:k]) for k in range(3, len(floats) + 1)]
    estimates = [e for e in estimates if e is not None]
    if len(estimates) < min(2, len(floats) - 2) or not estimates:
        return None
    if max(estimates) - min(estimates) > tol:
        return None
    limit = estimates[-1]
    if abs(floats[-1] - limit) > 1e3 * tol:
        return None
    return limit


def probe_limit(trace: Trace, tol: Optional[float] = None, window: Optional[int] = None,
                threshold: Optional[float] = None) -> LimitVerdict:
    """
    Численный предел трассы (n, значение).

    Args:
        trace: Точки трассы по возрастанию n
        tol: Точность
        window: Число K последних значений
        threshold: Порог роста для расходимости

    Returns:
        LimitVerdict: Вердикт о пределе
    """
    config = get_config()
    tol = config.TOLERANCE if tol is None else tol
    window = window or config.WINDOW
    threshold = threshold or config.DIVERGENCE_THRESHOLD
    if len(trace) < MIN_POINTS:
        logger.debug(f"Трасса из {len(trace)} точек слишком коротка")
        return LimitVerdict(LimitKind.INCONCLUSIVE, tolerance=tol)
    values = [v for _, v in trace]
    tail = values[-window:]
    if all(math.isinf(v) for v in tail) and len({math.copysign(1, v) for v in tail}) == 1:
        return LimitVerdict(LimitKind.DIVERGES, direction=int(math.copysign(1, tail[-1])), tolerance=tol)

    limit = _converges(values, tol, window)
    if limit is not None:
        return LimitVerdict(LimitKind.CONVERGES, value=limit, tolerance=tol)

    ns = [n for n, _ in trace]
    if any(n % 2 for n in ns) and any(n % 2 == 0 for n in ns):
        odd = [v for n, v in trace if n % 2]
        even = [v for n, v in trace if n % 2 == 0]
    else:
        odd, even = values[1::2], values[0::2]
    sub_window = max(3, window // 2 + 1)
    limits = [_converges(part, tol, sub_window) for part in (odd, even)]
    if all(lim is not None for lim in limits) and abs(float(limits[0]) - float(limits[1])) > 4 * tol:
        return LimitVerdict(LimitKind.OSCILLATES, limits=tuple(sorted(limits, key=float)), tolerance=tol)

    finite = [float(v) for v in tail if math.isfinite(v)]
    if len(finite) == len(tail) and abs(finite[-1]) > threshold:
        steps = np.diff(np.abs(finite))
        if np.all(steps > 0):
            return LimitVerdict(LimitKind.DIVERGES, direction=1 if finite[-1] > 0 else -1, tolerance=tol)
    return LimitVerdict(LimitKind.INCONCLUSIVE, tolerance=tol)


def upper_limit(trace: Trace, tol: Optional[float] = None) -> Optional[Number]:
    """Оценка limsup: предел, наибольший предел подпоследовательностей или максимум хвоста."""
    return _one_sided(trace, tol, upper=True)


def lower_limit(trace: Trace, tol: Optional[float] = None) -> Optional[Number]:
    """Оценка liminf."""
    return _one_sided(trace, tol, upper=False)


def _one_sided(trace: Trace, tol: Optional[float], upper: bool) -> Optional[Number]:
    if len(trace) < MIN_POINTS:
        return None
    verdict = probe_limit(trace, tol)
    if verdict.kind == LimitKind.CONVERGES:
        return verdict.value
    if verdict.kind == LimitKind.OSCILLATES:
        return verdict.limits[-1] if upper else verdict.limits[0]
    if verdict.kind == LimitKind.DIVERGES:
        return verdict.direction * INF
    tail = [v for _, v in trace[-get_config().WINDOW:]]
    return max(tail) if upper else min(tail)


def compare(estimate: Optional[Number], bound: Number, tol: float, upper: bool) -> Verdict:
    """estimate ≤ bound (upper) или estimate ≥ bound в пределах tol."""
    if estimate is None:
        return Verdict.INCONCLUSIVE
    if upper:
        ok = estimate <= bound or float(estimate) <= float(bound) + tol
    else:
        ok = estimate >= bound or float(estimate) >= float(bound) - tol
    return Verdict.PASS if ok else Verdict.FAIL


# Библиотека пробных множеств


@dataclass(frozen=True)
class ProbeSet:
    """Пробное множество с идентификатором для трасс."""

    id: str
    subset: BorelSet


def random_real_sets(space: Space, rng: np.random.Generator, count: int,
                     window: Tuple[Number, Number]) -> List[BorelSet]:
    """Ограниченные объединения 1-3 интервалов с узлами на сетке 1/64 окна и случайными флагами концов."""
    lo, hi = window
    sets: List[BorelSet] = []
    for _ in range(count):
        pieces = int(rng.integers(1, 4))
        steps = sorted(int(s) for s in rng.choice(np.arange(0, 65), size=2 * pieces, replace=False))
        intervals = []
        for a, b in zip(steps[0::2], steps[1::2]):
            flags = rng.integers(0, 2, size=2)
            intervals.append(Interval(lo + (hi - lo) * Fraction(a, 64), lo + (hi - lo) * Fraction(b, 64),
                                      bool(flags[0]), bool(flags[1])))
        points = []
        if rng.integers(0, 4) == 0:
            points.append(lo + (hi - lo) * Fraction(int(rng.integers(1, 64)), 64))
        sets.append(RealSet.build(space, intervals, points, clip=True))
    return sets


def random_natural_sets(space: Space, rng: np.random.Generator, count: int, limit: int = 64) -> List[BorelSet]:
    """Конечные подмножества {1..limit} размера до 8, их дополнения и классы вычетов."""
    sets: List[BorelSet] = []
    for _ in range(count):
        size = int(rng.integers(1, 9))
        members = sorted(int(s) for s in rng.choice(np.arange(1, limit + 1), size=size, replace=False))
        finite = NatSet.finite(space, members)
        sets.extend([finite, finite.complement()])
    for period in (2, 3):
        for residue in range(period):
            sets.append(NatSet.residue_class(space, period, [residue]))
    return sets


def neighbourhoods(space: Space, points: Sequence[Number], radius: Fraction) -> List[BorelSet]:
    """Открытые, замкнутые и полуоткрытые окрестности точек."""
    if space.kind != SpaceKind.REAL_LINE:
        return [NatSet.finite(space, [int(p)]) for p in points]
    sets: List[BorelSet] = []
    for p in points:
        for lo_closed, hi_closed in ((False, False), (True, True), (False, True)):
            sets.append(RealSet.build(space, [Interval(p - radius, p + radius, lo_closed, hi_closed)], clip=True))
    return sets


def unique(probes: Sequence[ProbeSet]) -> List[ProbeSet]:
    seen = set()
    result = []
    for probe in probes:
        key = str(probe.subset)
        if key in seen or probe.subset.is_empty:
            continue
        seen.add(key)
        result.append(probe)
    return result
