"""Перечисления для типов данных."""
from enum import Enum


class SpaceKind(str, Enum):
    """Виды пространств."""
    REAL_LINE = "real_line"  # промежуток числовой прямой, евклидова метрика
    DISCRETE_NAT = "discrete_nat"  # ℕ с дискретной топологией, ρ(m, n) = |m - n|
    COFINITE_NAT = "cofinite_nat"  # ℕ с коконечной топологией, неметризуемо


class DensityKind(str, Enum):
    """Семейства плотностей."""
    CONSTANT = "constant"  # c
    POWER = "power"  # c·x^p
    POLYNOMIAL = "polynomial"  # Σ a_k x^k
    PIECEWISE_LINEAR = "piecewise_linear"  # линейная интерполяция по узлам


class RuleKind(str, Enum):
    """Правила весов дискретной части меры."""
    COUNTING = "counting"  # w(n) = c
    POWER = "power"  # w(n) = c·n^p
    GEOMETRIC = "geometric"  # w(n) = c·r^n


class TailKind(str, Enum):
    """Классификация хвоста дискретного ряда."""
    SUMMABLE = "summable"
    DIVERGENT = "divergent"


class Regularity(str, Enum):
    """Сертифицированные свойства пробных функций."""
    CONTINUOUS = "continuous"
    UNIFORMLY_CONTINUOUS = "uniformly_continuous"
    HOLDER = "holder"
    BOUNDED_MEASURABLE = "bounded_measurable"
    VANISHES_AT_INFINITY = "vanishes_at_infinity"


class FunctionClass(str, Enum):
    """Семейства пробных функций для random_family."""
    CC = "Cc"  # непрерывные с компактным носителем
    C0 = "C0"  # непрерывные, исчезающие на бесконечности
    CB = "Cb"  # ограниченные непрерывные
    M_GAMMA = "Mgamma"  # измеримые со значениями в [-γ, γ]
    HOLDER = "holder"
    UNIFORMLY_CONTINUOUS = "uniformly_continuous"


class EstimatorClass(str, Enum):
    """Классы множеств и функций для оценок супремума."""
    CLOSED_BOUNDED_SETS = "closed_bounded_sets"
    OPEN_BOUNDED_SETS = "open_bounded_sets"
    COMPACT_SETS = "compact_sets"
    M_GAMMA = "Mgamma"
    M_GAMMA_BOUNDED_SUPPORT = "Mgamma_bounded_support"
    CONTINUOUS_BOUNDED_SUPPORT = "continuous_bounded_support_gamma"
    UNIFORMLY_CONTINUOUS = "uniformly_continuous"
    HOLDER_BOUNDED = "holder_bounded"

    @property
    def is_function_class(self) -> bool:
        """Класс функций (а не множеств)."""
        return self not in (
            EstimatorClass.CLOSED_BOUNDED_SETS,
            EstimatorClass.OPEN_BOUNDED_SETS,
            EstimatorClass.COMPACT_SETS,
        )


class IntegralMethod(str, Enum):
    """Способ вычисления интеграла."""
    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"


class IntegralStatus(str, Enum):
    """Статус результата интегрирования."""
    FINITE = "finite"
    DIVERGENT = "divergent"
    INCONCLUSIVE = "inconclusive"


class Verdict(str, Enum):
    """Вердикты проверок."""
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


class LimitKind(str, Enum):
    """Характер численного предела."""
    CONVERGES = "converges"
    DIVERGES = "diverges"
    OSCILLATES = "oscillates"
    INCONCLUSIVE = "inconclusive"


class Mode(str, Enum):
    """Режимы сходимости, от слабейшего к сильнейшему."""
    VAGUE = "vague"
    WEAK = "weak"
    SETWISE = "setwise"
    TV = "tv"


class VagueCondition(str, Enum):
    """Эквивалентные условия грубой (vague) сходимости на полном пространстве Гейне-Бореля."""
    CC_FUNCTIONS = "cc_functions"
    COMPACT_AND_OPEN_SETS = "compact_and_open_sets"
    CLOSED_AND_OPEN_BOUNDED_SETS = "closed_and_open_bounded_sets"
    SANDWICH = "sandwich"
    CONTINUITY_SETS = "continuity_sets"
    BOUNDED_SUPPORT_CONTINUOUS = "bounded_support_continuous"
    HOLDER_CC = "holder_cc"
    UNIFORMLY_CONTINUOUS_CC = "uniformly_continuous_cc"
    NULL_DISCONTINUITY_MB = "null_discontinuity_mb"
    NONNEGATIVE_CC = "nonnegative_cc"


class SetwiseCondition(str, Enum):
    """Условия поточечной на множествах (setwise) сходимости."""
    ALL_SETS = "all_sets"
    OPEN_SETS = "open_sets"
    CLOSED_SETS = "closed_sets"
    OPEN_BOUNDED_SETS = "open_bounded_sets"
    CLOSED_BOUNDED_SETS = "closed_bounded_sets"


class Provenance(str, Enum):
    """Происхождение ожидаемого значения в галерее."""
    PAPER = "PAPER"
    TRIVIAL = "TRIVIAL"
    DERIVED = "DERIVED"


class ExpectationStatus(str, Enum):
    """Итог проверки ожидания галереи."""
    PASS = "pass"
    FAIL = "fail"
    PAPER_DISCREPANCY = "paper-discrepancy"
    INCONCLUSIVE = "inconclusive"
