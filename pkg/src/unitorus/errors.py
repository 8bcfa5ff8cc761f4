"""Exception hierarchy shared by all modules."""


class UnitorusError(Exception):
    """Base class for every error raised by the package."""


class NotUnipotent(UnitorusError):
    pass


class NotQuasiUnipotent(UnitorusError):
    pass


class NotSymmetric(UnitorusError):
    pass


class BadComplexStructure(UnitorusError):
    pass


class BadDegree(UnitorusError):
    pass


class WrongArity(UnitorusError):
    pass


class NotKahler(UnitorusError):
    pass


class ChainStalled(UnitorusError):
    pass


class LChainNotFound(UnitorusError):
    pass


class InvalidChain(UnitorusError):
    pass


class NotInFj(UnitorusError):
    pass


class MalformedWord(UnitorusError):
    pass


class BadParameters(UnitorusError):
    pass


class InvariantViolation(UnitorusError):
    """A property that a proven statement guarantees turned out false."""


class ParseError(UnitorusError):
    """Raised for malformed group files; ``issues`` lists structured diagnostics."""

    def __init__(self, message, issues=None):
        super().__init__(message)
        self.issues = list(issues or [])
