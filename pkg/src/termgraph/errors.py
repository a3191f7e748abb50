"""Exception types shared across the package."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Tuple


@dataclass(frozen=True)
class Violation:
    """One failed condition in a validation report."""

    code: str
    message: str
    nodes: Tuple[str, ...] = field(default=())

    def __str__(self) -> str:
        return self.message


class TermGraphError(Exception):
    pass


class DomainError(TermGraphError, ValueError):
    """A function argument does not satisfy an operation's precondition."""


class ValidationError(TermGraphError):
    """Raised when a graph, rule, matching or cone fails validation."""

    def __init__(self, report: Sequence[Violation], context: str = ""):
        self.report = list(report)
        self.context = context
        lines = [str(v) for v in self.report]
        head = f"{context}: " if context else ""
        super().__init__(head + "; ".join(lines))


class InvariantError(TermGraphError, AssertionError):
    """An internal invariant of the construction failed (an engine bug)."""


class ParseError(TermGraphError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        self.bare_message = message
        where = f"{line}:{column}: " if line else ""
        super().__init__(where + message)
