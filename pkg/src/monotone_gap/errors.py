"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so keep the split between usage
problems and mathematical domain problems intact.
"""


class MonotoneGapError(Exception):
    """Base class for all library errors."""


class InvalidArgument(MonotoneGapError, ValueError):
    pass


class DomainError(MonotoneGapError, ArithmeticError):
    """Evaluation at a pole, or an input outside a function's domain."""


class InternalError(MonotoneGapError, RuntimeError):
    """An invariant that should hold by construction was violated."""


class SamplingExhausted(MonotoneGapError, RuntimeError):
    pass


class ConversionFailed(MonotoneGapError, RuntimeError):
    pass


class UnsupportedIntervalPair(InvalidArgument):
    pass


class ParseError(InvalidArgument):
    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)
