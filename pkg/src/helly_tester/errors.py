"""Exception hierarchy. Every error raised on purpose derives from HellyError."""


class HellyError(Exception):
    """Base class for errors raised by helly_tester."""


class DimensionMismatch(HellyError, ValueError):
    pass


class InvalidSet(HellyError, ValueError):
    """A convex set violates its construction invariants."""


class EmptyTuple(HellyError, ValueError):
    pass


class EmptyInstance(HellyError, ValueError):
    pass


class ParamOutOfRange(HellyError, ValueError):
    pass


class TupleLargerThanFamily(HellyError, ValueError):
    pass


class EnumerationTooLarge(HellyError):
    pass


class GroundTruthUnavailable(HellyError):
    pass


class HypothesisNotMet(HellyError):
    pass


class StrictModeViolation(HellyError):
    """A ball reached the oracle while exact answers were required."""


class ParseError(HellyError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
