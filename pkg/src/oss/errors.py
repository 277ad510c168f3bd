"""Exception hierarchy shared by every module of the package."""


class OSSError(Exception):
    """Base class for all errors raised by this package."""


class CapabilityMissing(OSSError):
    pass


class NotComparable(OSSError):
    pass


class ZeroInverse(OSSError, ZeroDivisionError):
    pass


class UnknownSemiring(OSSError):
    pass


class BadParams(OSSError, ValueError):
    pass


class BadElement(OSSError, ValueError):
    """A value is not a member of the semiring's carrier."""


class SemiringMismatch(OSSError):
    pass


class PartialFunction(OSSError):
    """A function passed to pushforward/bind is undefined on part of a support."""


class UnknownElement(OSSError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class CycleDetected(OSSError):
    pass


class TooLarge(OSSError):
    pass


class SizeTooLarge(TooLarge):
    pass


class MassViolation(OSSError):
    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class InconsistentRow(OSSError):
    pass


class DimensionMismatch(OSSError):
    pass


class MaxIterExceeded(OSSError):
    """Kleene iteration hit its budget; ``report`` holds the best lower bound."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ParseError(OSSError):
    def __init__(self, message, line=None, column=None):
        loc = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(loc + message)
        self.line = line
        self.column = column


class DuplicateEquation(ParseError):
    pass


class UndeclaredIdentifier(ParseError):
    pass
