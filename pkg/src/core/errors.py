"""Domain errors raised by spaces, mappings, checkers and solvers"""
from typing import Any, Optional


class ExpansiveError(Exception):
    """Base class for mathematical failures (exit status 1)"""
    pass


class EmptySpace(ExpansiveError):
    pass


class UnsupportedSpace(ExpansiveError):
    """The operation needs an enumeration the space does not provide"""
    pass


class DomainError(ExpansiveError):
    """A growth function was evaluated outside (0, inf)"""
    pass


class NotSurjective(ExpansiveError):
    def __init__(self, message: str, uncovered: Optional[list] = None):
        super().__init__(message)
        self.uncovered = uncovered or []


class MissingOrder(ExpansiveError):
    pass


class ContainmentViolated(ExpansiveError):
    """V(M) is not contained in U(M)"""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class StartConditionViolated(ExpansiveError):
    """x0 is not below U*x0"""
    pass


class NonMonotoneTrace(ExpansiveError):
    """Step distances kept increasing; the partial trace is attached"""

    def __init__(self, message: str, trace: Any = None):
        super().__init__(message)
        self.trace = trace


class CoincidenceNotFixed(ExpansiveError):
    def __init__(self, message: str, point: Any = None, trace: Any = None):
        super().__init__(message)
        self.point = point
        self.trace = trace


class TraceTooShort(ExpansiveError):
    pass


class UnknownGalleryItem(Exception):
    """Usage error (exit status 2)"""
    pass


class SpecParseError(Exception):
    """Malformed problem spec (exit status 2) with line/field diagnostics"""

    def __init__(self, message: str, line: Optional[int] = None,
                 column: Optional[int] = None, field: Optional[str] = None):
        super().__init__(message)
        self.line = line
        self.column = column
        self.field = field

    def __str__(self) -> str:
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.column is not None:
            where.append(f"column {self.column}")
        if self.field:
            where.append(f"field '{self.field}'")
        base = super().__str__()
        return f"{base} ({', '.join(where)})" if where else base
