"""
Разбор литералов множеств, функций и чисел.

Грамматика описана в docs/SYNTAX.md. Концы интервалов и формулы
разбираются sympy; шаблоны последовательностей подставляют n до разбора.
"""
import logging
import re
from fractions import Fraction
from typing import List, Optional, Tuple

import sympy

from core.numbers import INF, Number, exact
from core.poly import Poly
from core.space import BorelSet, Interval, NatSet, Space, canonicalize
from core.testfn import X, ExprFunction, FunctionPiece, TestFunction
from utils.enums import Regularity
from utils.exceptions import DomainError, ParseError

logger = logging.getLogger(__name__)

N = sympy.Symbol("n", integer=True, positive=True)

_UNION = re.compile(r"\s+u\s+|∪")
_RESIDUES = re.compile(r"^mod\s*(.+?)\s*\{(.*)\}$")


def _split_top(text: str, separator: re.Pattern) -> List[str]:
    """Разбиение по разделителю вне скобок."""
    parts, depth, start = [], 0, 0
    position = 0
    while position < len(text):
        char = text[position]
        if char in "([{":
            depth += 1
        elif char in ")]}":
            depth -= 1
        elif depth == 0:
            match = separator.match(text, position)
            if match and match.end() > position:
                parts.append(text[start:position])
                start = position = match.end()
                continue
        position += 1
    parts.append(text[start:])
    return [p.strip() for p in parts]


def _sympify(text: str, n: Optional[int] = None):
    local = {"inf": sympy.oo, "oo": sympy.oo, "x": X}
    if n is not None:
        local["n"] = sympy.Integer(n)
    else:
        local["n"] = N
    try:
        return sympy.sympify(text.strip(), locals=local)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ParseError(f"Не удалось разобрать выражение '{text}': {exc}") from exc


def parse_number(text, n: Optional[int] = None) -> Number:
    """
    Число из JSON: int, float или строка с точным выражением.

    Args:
        text: "1/3", "2/3", "inf", "sqrt(2)", "(3+(-1)**n)/(2*n**2)" или число
        n: Значение n для шаблонов

    Returns:
        Number: Fraction для рациональных значений, float для остальных

    Raises:
        ParseError: Выражение не является вещественным числом
    """
    if isinstance(text, bool):
        raise ParseError(f"Логическое значение {text} не является числом")
    if isinstance(text, (int, float, Fraction)):
        return exact(text)
    value = _sympify(str(text), n)
    if value == sympy.oo:
        return INF
    if value == -sympy.oo:
        return -INF
    if value.free_symbols:
        raise ParseError(f"Выражение '{text}' содержит свободные переменные {sorted(map(str, value.free_symbols))}")
    if value.is_Rational:
        return Fraction(int(value.p), int(value.q))
    if value.is_real:
        return float(value)
    raise ParseError(f"Выражение '{text}' не является вещественным числом")


def parse_set(text: str, space: Space, n: Optional[int] = None) -> BorelSet:
    """
    Множество из литерала.

    Args:
        text: Например "(0,1/3] u {2/3} u [0.9,1)", "co{1,2,3}", "mod 2{0} u {1}", "{n..}"
        space: Пространство
        n: Значение n для шаблонов

    Returns:
        BorelSet: Каноническое множество

    Raises:
        ParseError: Синтаксическая ошибка
        DomainError: Компонента вне области пространства
    """
    text = text.strip()
    if not text:
        raise ParseError("Пустой литерал множества")
    removed = _split_top(text, re.compile(r"\s*\\\s*"))
    result = _parse_union(removed[0], space, n)
    for part in removed[1:]:
        result = result.difference(_parse_union(part, space, n))
    return result


def _parse_union(text: str, space: Space, n: Optional[int]) -> BorelSet:
    intervals: List[Interval] = []
    points: List[Number] = []
    extra: List[BorelSet] = []
    for component in _split_top(text, _UNION):
        if not component:
            raise ParseError(f"Пустая компонента в '{text}'")
        if component == "X":
            extra.append(space.whole())
        elif component == "{}":
            continue
        elif component.startswith("co{"):
            extra.append(NatSet.cofinite(_natural_space(space, component), _naturals(component[3:-1], n)))
        elif component.startswith("mod"):
            match = _RESIDUES.match(component)
            if not match:
                raise ParseError(f"Ожидался класс вычетов 'mod q{{r,...}}': '{component}'")
            period = int(parse_number(match.group(1), n))
            residues = [int(parse_number(r, n)) for r in match.group(2).split(",") if r.strip()]
            extra.append(NatSet.residue_class(_natural_space(space, component), period, residues))
        elif component.startswith("{"):
            if not component.endswith("}"):
                raise ParseError(f"Незакрытая фигурная скобка: '{component}'")
            body = component[1:-1]
            if ".." in body:
                start, _, stop = body.partition("..")
                lo = parse_number(start, n)
                hi = parse_number(stop, n) if stop.strip() else INF
                intervals.append(Interval.make(lo, hi, True, True))
            else:
                points.extend(parse_number(p, n) for p in _split_top(body, re.compile(",")) if p)
        elif component[0] in "([" and component[-1] in ")]":
            bounds = _split_top(component[1:-1], re.compile(","))
            if len(bounds) != 2:
                raise ParseError(f"Интервал должен иметь два конца: '{component}'")
            lo, hi = (parse_number(b, n) for b in bounds)
            intervals.append(Interval.make(lo, hi, component[0] == "[", component[-1] == "]"))
        else:
            raise ParseError(f"Неизвестная компонента множества: '{component}'")
    try:
        result = canonicalize(space, intervals, points)
    except DomainError as exc:
        raise ParseError(str(exc)) from exc
    for subset in extra:
        result = result.union(subset)
    return result


def _natural_space(space: Space, component: str) -> Space:
    if not space.is_natural:
        raise ParseError(f"Компонента '{component}' допустима только на ℕ, а пространство {space}")
    return space


def _naturals(body: str, n: Optional[int]) -> List[int]:
    values = []
    for item in body.split(","):
        if not item.strip():
            continue
        value = parse_number(item, n)
        if not isinstance(value, Fraction) or value.denominator != 1:
            raise ParseError(f"Ожидалось натуральное число: '{item}'")
        values.append(int(value))
    return values


def parse_formula(text: str, n: Optional[int] = None):
    """Poly для сумм c·x^p, иначе ExprFunction для квадратуры."""
    expr = _sympify(text, n)
    extra = expr.free_symbols - {X}
    if extra:
        raise ParseError(f"Формула '{text}' содержит посторонние переменные {sorted(map(str, extra))}")
    poly = Poly.from_expr(expr, X)
    if poly is not None:
        return poly
    logger.debug(f"Формула '{text}' не сводится к сумме c·x^p, интеграл будет численным")
    return ExprFunction(str(expr))


def parse_function(text: str, space: Space, n: Optional[int] = None, label: str = "") -> TestFunction:
    """
    Функция из литерала pw[<множество>: <формула>; ...] или голой формулы.

    Вне всех кусков функция равна нулю. Граница γ вычисляется для
    многочленных кусков на ограниченных областях, иначе бесконечна.
    Метки регулярности литералам не присваиваются, кроме
    ограниченной измеримости.

    Raises:
        ParseError: Синтаксическая ошибка или пересечение областей кусков
    """
    text = text.strip()
    if text.startswith("pw[") and text.endswith("]"):
        entries = []
        for item in _split_top(text[3:-1], re.compile(";")):
            if not item:
                continue
            region, colon, formula = item.rpartition(":")
            if not colon:
                raise ParseError(f"Кусок функции должен иметь вид '<множество>: <формула>': '{item}'")
            entries.append((parse_set(region, space, n), parse_formula(formula, n)))
    else:
        entries = [(space.whole(), parse_formula(text, n))]
    covered = space.empty()
    for region, _ in entries:
        if not covered.intersection(region).is_empty:
            raise ParseError(f"Области кусков функции пересекаются: {region}")
        covered = covered.union(region)
    pieces = tuple(FunctionPiece(region, formula) for region, formula in entries)
    bound = _bound(pieces)
    tags = frozenset({Regularity.BOUNDED_MEASURABLE}) if bound != INF else frozenset()
    return TestFunction(space, pieces, bound, tags, None, label or text)


def _bound(pieces: Tuple[FunctionPiece, ...]) -> Number:
    bound: Number = Fraction(0)
    for piece in pieces:
        if not isinstance(piece.formula, Poly):
            return INF
        if isinstance(piece.region, NatSet):
            if not piece.region.is_finite:
                if not piece.formula.is_constant:
                    return INF
                bound = max(bound, abs(piece.formula.constant_value))
                continue
            bound = max([bound] + [abs(piece.formula(k)) for k in piece.region.exceptions])
            continue
        for component in piece.region.components():
            if component.is_point:
                bound = max(bound, abs(piece.formula(component.lo)))
            else:
                bound = max(bound, piece.formula.sup_abs(component.lo, component.hi))
    return bound


def is_template(text) -> bool:
    """Содержит ли строка переменную шаблона n."""
    return isinstance(text, str) and re.search(r"(?<![A-Za-z_])n(?![A-Za-z_])", text) is not None
