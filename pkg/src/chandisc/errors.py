"""Exception hierarchy shared by all modules."""


class ChanDiscError(ValueError):
    pass


class NotSquare(ChanDiscError):
    pass


class NotHermitian(ChanDiscError):
    pass


class NotUnitary(ChanDiscError):
    pass


class NotPSD(ChanDiscError):
    pass


class DimensionMismatch(ChanDiscError):
    pass


class InvalidChannel(ChanDiscError):
    pass


class InvalidState(ChanDiscError):
    pass


class NotNormalized(ChanDiscError):
    pass


class ZeroTotalProbability(ChanDiscError):
    pass


class InvalidStrategy(ChanDiscError):
    pass


class InvalidSpec(ChanDiscError):
    pass


class MissingResult(ChanDiscError):
    pass


class ParseError(ChanDiscError):
    """Malformed problem input. ``context`` names the line or field."""

    def __init__(self, message, context=None):
        self.context = context
        if context is not None:
            message = f"{context}: {message}"
        super().__init__(message)


class ValidationError(ChanDiscError):
    """Input parsed but violates invariants; ``failures`` lists (name, residual)."""

    def __init__(self, message, failures=()):
        self.failures = list(failures)
        super().__init__(message)


class UnsupportedTask(ChanDiscError):
    pass
