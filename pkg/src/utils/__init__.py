"""Utils package."""
from utils.enums import (
    SpaceKind,
    DensityKind,
    RuleKind,
    TailKind,
    Regularity,
    FunctionClass,
    EstimatorClass,
    IntegralMethod,
    IntegralStatus,
    Verdict,
    LimitKind,
    Mode,
    VagueCondition,
    SetwiseCondition,
    Provenance,
    ExpectationStatus,
)
from utils.exceptions import (
    MeasureModesError,
    DomainError,
    SpaceMismatchError,
    UnsupportedMetricError,
    UnsupportedClassError,
    DegenerateInputError,
    PreconditionError,
    UnknownCaseError,
    IntegrationError,
    DivergentIntegralError,
    DivergentMassError,
    ParseError,
)

__all__ = [
    "SpaceKind",
    "DensityKind",
    "RuleKind",
    "TailKind",
    "Regularity",
    "FunctionClass",
    "EstimatorClass",
    "IntegralMethod",
    "IntegralStatus",
    "Verdict",
    "LimitKind",
    "Mode",
    "VagueCondition",
    "SetwiseCondition",
    "Provenance",
    "ExpectationStatus",
    "MeasureModesError",
    "DomainError",
    "SpaceMismatchError",
    "UnsupportedMetricError",
    "UnsupportedClassError",
    "DegenerateInputError",
    "PreconditionError",
    "UnknownCaseError",
    "IntegrationError",
    "DivergentIntegralError",
    "DivergentMassError",
    "ParseError",
]
