"""Exception hierarchy shared across perfchar."""


class PerfcharError(Exception):
    """Base class; the CLI maps subclasses to exit codes."""


class ParseError(PerfcharError, ValueError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class NonPPowerDenominator(ParseError):
    pass


class UnknownVariable(ParseError):
    pass


class CharacteristicMismatch(PerfcharError, ValueError):
    pass


class LevelTooLow(PerfcharError, ValueError):
    pass


class NotPPower(PerfcharError, ValueError):
    pass


class ResourceExceeded(PerfcharError, RuntimeError):
    """A step budget was exhausted before the computation finished."""


class InfiniteColength(PerfcharError, ValueError):
    pass


class InsufficientRows(PerfcharError, ValueError):
    pass


class SingularSystem(PerfcharError, ArithmeticError):
    pass


class RelationViolated(PerfcharError, ValueError):
    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"relation a_k = x^((p-1)/p^k) * a_(k+1) fails at k={index}")


class MultiVariable(PerfcharError, ValueError):
    pass


class ConstraintViolation(PerfcharError, ValueError):
    pass


class ImperfectRing(PerfcharError, ValueError):
    pass


class PresentationError(PerfcharError, ValueError):
    pass
