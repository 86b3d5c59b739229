from __future__ import annotations


class DilatorError(Exception):
    """Base class for all errors raised by this package."""


class SlotMismatch(DilatorError):
    pass


class LabelNotInCarrier(DilatorError):
    pass


class NotIncreasing(DilatorError):
    pass


class BoundExceeded(DilatorError):
    pass


class UnknownTerm(DilatorError):
    pass


class ArityMismatch(DilatorError):
    pass


class InvalidPredilator(DilatorError):
    pass


class NoConsistentFit(DilatorError):
    pass


class SupportViolation(DilatorError):
    pass


class NotAFlower(DilatorError):
    pass


class InvalidDendrogram(DilatorError):
    pass


class NotTrekkable(DilatorError):
    pass


class NotLess(DilatorError):
    pass


class SelectorPartial(DilatorError):
    pass


class ParseError(DilatorError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = "" if line is None else f"line {line}, column {column or 1}: "
        super().__init__(where + message)


class InconsistentSigma(DilatorError):
    pass


class IllegalMove(DilatorError):
    pass


class BudgetExceeded(DilatorError):
    pass
