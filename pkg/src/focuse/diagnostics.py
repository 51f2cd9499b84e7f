"""Source positions, diagnostics, and parse results.

Every parser and load-time validator reports problems as Diagnostic
values instead of raising, so a bad input can never abort the process.
Codes are stable identifiers; messages are for humans.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, List, Optional

ERROR = "error"
WARNING = "warning"

# Words with grammatical meaning in the textual formats.  Declared names
# (components, nets, instances, channels, state variables, binders) may
# not collide with them; message names and sorts are unrestricted.
RESERVED_WORDS = frozenset(
    """
    component net use wire in out state asm gar trans end delayed
    empty any msg true occurs first each before after ci
    """.split()
)


@dataclass(frozen=True)
class SourceSpan:
    """1-based line/column position plus length in characters."""

    line: int
    column: int
    length: int = 1

    def __post_init__(self) -> None:
        if self.line < 1 or self.column < 1 or self.length < 0:
            raise ValueError(f"invalid span {self.line}:{self.column}+{self.length}")

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


# Placeholder for diagnostics about values built in code, which have no
# source text to point into.
NO_SPAN = SourceSpan(1, 1, 0)


@dataclass(frozen=True)
class Diagnostic:
    severity: str           # ERROR or WARNING
    span: SourceSpan
    message: str
    code: str

    def __post_init__(self) -> None:
        if self.severity not in (ERROR, WARNING):
            raise ValueError(f"bad severity {self.severity!r}")
        if not self.message:
            raise ValueError("diagnostic message must be nonempty")

    def __str__(self) -> str:
        return f"{self.severity}[{self.code}] {self.span}: {self.message}"


def error(span: SourceSpan, message: str, code: str) -> Diagnostic:
    return Diagnostic(ERROR, span, message, code)


def warning(span: SourceSpan, message: str, code: str) -> Diagnostic:
    return Diagnostic(WARNING, span, message, code)


def has_errors(diagnostics: "List[Diagnostic]") -> bool:
    return any(d.severity == ERROR for d in diagnostics)


@dataclass
class ParseResult:
    """Outcome of a parse: a value, diagnostics, or both.

    value is present exactly when no error-severity diagnostics were
    produced; warnings may accompany a successful parse.
    """

    value: Optional[Any] = None
    diagnostics: List[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not has_errors(self.diagnostics)


# Stable diagnostic codes.
UNEXPECTED_CHAR = "UNEXPECTED_CHAR"
ENCODING = "ENCODING"
EXPECTED = "EXPECTED"
EMPTY_INPUT = "EMPTY_INPUT"
EMPTY_INTERVAL = "EMPTY_INTERVAL"
TRAILING_INPUT = "TRAILING_INPUT"
NEST_DEPTH = "NEST_DEPTH"
BAD_INT = "BAD_INT"
BAD_NAME = "BAD_NAME"
RESERVED_NAME = "RESERVED_NAME"
DUP_NAME = "DUP_NAME"
DUP_BINDING = "DUP_BINDING"
DUP_ASSIGN = "DUP_ASSIGN"
UNDECLARED_NAME = "UNDECLARED_NAME"
UNBOUND_VAR = "UNBOUND_VAR"
WRITE_TO_INPUT = "WRITE_TO_INPUT"
UNREACHABLE_TRANS = "UNREACHABLE_TRANS"
NO_TRANSITIONS = "NO_TRANSITIONS"
BAD_INIT = "BAD_INIT"
UNKNOWN_COMPONENT = "UNKNOWN_COMPONENT"
WIRE_DIRECTION = "WIRE_DIRECTION"
FAN_IN = "FAN_IN"
UNDELAYED_CYCLE = "UNDELAYED_CYCLE"
UNWIRED = "UNWIRED"
TOO_MANY_ERRORS = "TOO_MANY_ERRORS"
