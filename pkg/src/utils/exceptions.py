"""Исключения библиотеки."""
from typing import Optional


class MeasureModesError(Exception):
    """Базовое исключение для всех ошибок библиотеки."""


class DomainError(MeasureModesError):
    """Компонента множества или меры лежит вне области пространства."""


class SpaceMismatchError(MeasureModesError):
    """Объекты заданы на разных пространствах."""

    def __init__(self, left, right):
        self.left = left
        self.right = right
        super().__init__(f"Несовпадение пространств: {left} и {right}")


class UnsupportedMetricError(MeasureModesError):
    """Операция требует метрики, а пространство неметризуемо."""


class UnsupportedClassError(MeasureModesError):
    """Класс функций или множеств не поддерживается на данном пространстве."""


class DegenerateInputError(MeasureModesError):
    """Вырожденные входные данные (например, пустой внутренний зазор)."""


class PreconditionError(MeasureModesError):
    """Нарушено предусловие операции."""


class UnknownCaseError(MeasureModesError):
    """Неизвестный идентификатор случая галереи."""


class IntegrationError(MeasureModesError):
    """Интеграл не определён (∞ - ∞ или неинтегрируемая особенность)."""


class DivergentIntegralError(MeasureModesError):
    """Интеграл расходится к ±∞."""

    def __init__(self, direction: int, message: str = ""):
        self.direction = direction
        super().__init__(message or f"Интеграл расходится к {'+' if direction > 0 else '-'}∞")


class DivergentMassError(DivergentIntegralError):
    """Дискретная сумма расходится; хранит достигнутую частичную сумму."""

    def __init__(self, direction: int, partial_bound: float, terms: int = 0):
        self.partial_bound = partial_bound
        self.terms = terms
        super().__init__(
            direction,
            f"Ряд расходится к {'+' if direction > 0 else '-'}∞ "
            f"(частичная сумма {partial_bound:.6g} после {terms} членов)"
        )


class ParseError(MeasureModesError):
    """Ошибка разбора входных данных; указывает поле или строку."""

    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)
