"""Target operation identification from registration logs.

Builds resource threads and their integral functions from input/output
registrations, locates the time of actual completion (TACO) of an operation
both numerically and by closed-form formulas, and reports the basic
indicators (RE, PE, T_op, added value, conditional return).
"""
from .completion import (
    LinearizedPair,
    OperationBounds,
    TacoResult,
    determine_taco,
    first_crossing,
    linearize,
    physical_completion,
    start_time,
    taco_analytic,
    taco_numeric,
    taco_reduced,
)
from .errors import (
    EmptyOperation,
    IoError,
    NonEffectiveOperation,
    NonFiniteValue,
    NonPositiveQuantity,
    NonUniformGrid,
    NotReducedOperation,
    ParseError,
    TargetOpError,
    UnknownChannel,
    ValidationError,
)
from .indicators import IndicatorReport, assemble_report, economic_cost, economic_income
from .signals import (
    ChannelSpec,
    ImpulseTrain,
    OperationRecord,
    RegistrationEvent,
    Role,
    cost_impulses,
    reserve_impulses,
    validate_record,
)
from .threads import PiecewiseLinear, StepFunction, add, cumulate, evaluate, integrate, split_signs

__version__ = "0.1.0"
