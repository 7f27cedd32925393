"""Точные и приближённые числа: Fraction на рациональном пути, float на приближённом."""
import math
from fractions import Fraction
from typing import Union

Number = Union[int, Fraction, float]

INF = math.inf


def exact(value: Number) -> Number:
    """
    Приведение числа к каноническому виду.

    int превращается в Fraction, целые float остаются float:
    приближённый путь не притворяется точным.

    Args:
        value: Исходное число

    Returns:
        Number: Fraction для точных значений, float для остальных
    """
    if isinstance(value, bool):
        raise TypeError("Логическое значение не является числом")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return value
    raise TypeError(f"Неподдерживаемый тип числа: {type(value).__name__}")


def is_exact(value: Number) -> bool:
    return isinstance(value, (int, Fraction))


def is_finite(value: Number) -> bool:
    return is_exact(value) or math.isfinite(value)


def sign(value: Number) -> int:
    return (value > 0) - (value < 0)


def close(a: Number, b: Number, tol: float = 1e-12) -> bool:
    """Равенство: точное на рациональном пути, в пределах tol иначе."""
    if is_exact(a) and is_exact(b):
        return a == b
    if not (is_finite(a) and is_finite(b)):
        return a == b
    return abs(float(a) - float(b)) <= tol


def power(x: Number, p: Fraction) -> Number:
    """
    Вычисление x^p с сохранением точности для целых степеней.

    Args:
        x: Основание
        p: Рациональный показатель

    Returns:
        Number: Точное значение при целом p и точном x, иначе float

    Raises:
        ZeroDivisionError: При x = 0 и p < 0
        ValueError: При дробном p и отрицательном x
    """
    if p.denominator == 1:
        if is_exact(x):
            return Fraction(x) ** int(p)
        if x == 0 and p < 0:
            raise ZeroDivisionError("0 в отрицательной степени")
        return float(x) ** int(p)
    if x < 0:
        raise ValueError(f"Дробная степень {p} отрицательного числа {x}")
    if x == 0:
        if p < 0:
            raise ZeroDivisionError("0 в отрицательной степени")
        return Fraction(0) if is_exact(x) else 0.0
    root = _exact_root(x, p.denominator) if is_exact(x) else None
    if root is not None:
        return root ** p.numerator
    return float(x) ** float(p)


def _exact_root(x: Fraction, degree: int):
    """Точный корень степени degree из рационального числа, если он рационален."""
    x = Fraction(x)
    num = _integer_root(x.numerator, degree)
    den = _integer_root(x.denominator, degree)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _integer_root(value: int, degree: int):
    if value < 0 or value.bit_length() > 1000:
        return None
    guess = round(value ** (1.0 / degree)) if value else 0
    for candidate in (guess - 1, guess, guess + 1):
        if candidate >= 0 and candidate ** degree == value:
            return candidate
    return None


def rationalize(value: float, max_denominator: int = 10 ** 6) -> Fraction:
    return Fraction(value).limit_denominator(max_denominator)


def format_number(value: Number) -> str:
    """
    Текстовая запись числа для отчётов и литералов.

    Args:
        value: Число

    Returns:
        str: "2/3" для дробей, "3" для целых, repr для float, "inf"/"-inf"
    """
    if isinstance(value, bool):
        raise TypeError("Логическое значение не является числом")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(float(value))


def parse_number(text: str) -> Number:
    """Обратная операция к format_number для простых записей."""
    text = text.strip()
    if text in ("inf", "+inf", "oo"):
        return INF
    if text in ("-inf", "-oo"):
        return -INF
    try:
        return Fraction(text)
    except ValueError:
        return float(text)
