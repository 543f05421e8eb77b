"""Exception types raised by the analysis pipeline.

Every error derives from :class:`TargetOpError`; the CLI prints the class
name of the error it caught, so the names are part of the interface.
"""


class TargetOpError(Exception):
    """Base class for all analysis errors."""


class ValidationError(TargetOpError, ValueError):
    pass


class UnknownChannel(ValidationError):
    pass


class NonPositiveQuantity(ValidationError):
    pass


class NonFiniteValue(ValidationError):
    pass


class ParseError(TargetOpError, ValueError):
    pass


class NonUniformGrid(ParseError):
    pass


class EmptyOperation(TargetOpError):
    pass


class NonEffectiveOperation(TargetOpError):
    """Output cost does not exceed input cost, so no completion time exists."""


class NotReducedOperation(TargetOpError):
    """Linearization needs exactly one input and one output impulse."""


class IoError(TargetOpError, OSError):
    pass
