"""Exception types and the three-valued ``Inconclusive`` outcome."""

from __future__ import annotations

from dataclasses import dataclass, field


class PlumbingError(Exception):
    """Base class for every error raised by this package."""


class InvalidGraph(PlumbingError, ValueError):
    pass


class GenusNotSupported(PlumbingError):
    """A vertex has nonzero genus; all algorithms here work with spheres only."""


class SingularInconsistent(PlumbingError):
    pass


class MissingLocus(PlumbingError, KeyError):
    pass


class NotBlowdownable(PlumbingError):
    pass


class InvalidSequence(PlumbingError):
    pass


class NotNegativeDefinite(PlumbingError):
    pass


class Disconnected(PlumbingError):
    pass


class DimensionMismatch(PlumbingError):
    pass


class BudgetExceeded(PlumbingError):
    def __init__(self, message: str, budget: int | None = None):
        super().__init__(message)
        self.budget = budget


class UnverifiedEmbedding(PlumbingError):
    pass


class NotInLipmanCone(PlumbingError):
    pass


class NonIntegral(PlumbingError):
    def __init__(self, message: str, solution=None):
        super().__init__(message)
        self.solution = solution


class NonPositive(PlumbingError):
    def __init__(self, message: str, solution=None):
        super().__init__(message)
        self.solution = solution


class InconsistentArrows(PlumbingError):
    pass


class NotCoprime(PlumbingError, ValueError):
    pass


class MissingArrow(PlumbingError):
    pass


class Inadmissible(PlumbingError):
    pass


class MixedContexts(PlumbingError):
    pass


class InternalError(PlumbingError, AssertionError):
    """Two independent decision routes disagreed."""


class ParseError(PlumbingError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


class GraphSyntaxError(ParseError):
    pass


class DuplicateId(ParseError):
    pass


class DanglingReference(ParseError):
    pass


@dataclass(frozen=True)
class Inconclusive:
    """A search stopped at its resource cap before reaching an answer.

    Deliberately has no truth value: ``if result:`` on an inconclusive
    outcome is a bug, so it raises.
    """

    reason: str
    budget: int | None = None
    details: dict = field(default_factory=dict, compare=False)

    def __bool__(self):
        raise TypeError("an inconclusive outcome has no truth value")

    def __str__(self):
        return f"inconclusive ({self.reason}, budget={self.budget})"
