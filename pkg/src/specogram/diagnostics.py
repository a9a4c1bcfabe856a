"""Diagnostics shared by every validating operation in the toolkit.

Two reporting channels exist:

* :class:`SpecogramError` is raised by the in-process API (identifier
  validation, fragment parsing, builder preconditions) the moment a bad
  input reaches a call.  It carries a machine-readable ``code`` and, when
  the offending input is a piece of text, the 0-based ``offset`` of the
  first bad character within that text.
* :class:`Diagnostic` is the batch-compiler currency: the file frontend
  and the domain-model checker return lists of them, each anchored to a
  :class:`SourceSpan` in the source file.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"

    def __str__(self) -> str:
        return self.value


# Stable diagnostic codes.  Grouped by the operation family that emits them.
EMPTY_INPUT = "empty-input"
ILLEGAL_FIRST_CHARACTER = "illegal-first-character"
ILLEGAL_CHARACTER = "illegal-character"

MISSING_DOT = "missing-dot"
ILLEGAL_IDENTIFIER = "illegal-identifier"
TRAILING_GARBAGE = "trailing-garbage"
UNBALANCED_PARENTHESIS = "unbalanced-parenthesis"
UNKNOWN_OPERATOR = "unknown-operator"
DANGLING_OPERAND = "dangling-operand"
INTEGER_OVERFLOW = "integer-overflow"

DUPLICATE_LABEL = "duplicate-label"
DUPLICATE_BINDING = "duplicate-binding"
UNBOUND_VARIABLE = "unbound-variable"

MALFORMED_DOCUMENT = "malformed-document"
SCHEMA_VIOLATION = "schema-violation"
SYNTAX_ERROR = "syntax-error"

UNKNOWN_TYPE = "unknown-type"
UNKNOWN_FEATURE = "unknown-feature"
ACTION_NOT_COMMAND = "action-not-command"
EFFECT_NOT_QUERY = "effect-not-query"
NON_INTEGER_TARGET = "non-integer-target"
UNRESOLVED_PATH = "unresolved-path"
DUPLICATE_CLASS = "duplicate-class"
DUPLICATE_FEATURE = "duplicate-feature"

UNFINISHED_REQUIREMENT = "unfinished-requirement"


@dataclass(frozen=True)
class SourceSpan:
    """A contiguous region of one source line; line and column are 1-based."""

    file: str
    line: int
    column: int
    length: int = 0

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    span: SourceSpan

    def format(self) -> str:
        """Render in the conventional ``file:line:col: severity[code]: message`` shape."""
        return f"{self.span}: {self.severity}[{self.code}]: {self.message}"

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR


class SpecogramError(ValueError):
    """Rejection of a malformed input by an in-process operation.

    ``offset`` is the 0-based position of the problem within the text the
    operation received, or ``None`` when no single position applies.  An
    offset equal to ``len(text)`` marks an unexpected end of input.
    Operations that read whole documents attach a ``span`` instead.
    """

    def __init__(
        self,
        code: str,
        message: str,
        offset: int | None = None,
        span: SourceSpan | None = None,
    ):
        super().__init__(message)
        self.code = code
        self.message = message
        self.offset = offset
        self.span = span

    def to_diagnostic(self, span: SourceSpan | None = None) -> Diagnostic:
        where = span or self.span
        if where is None:
            raise ValueError("no span available for this error")
        return Diagnostic(Severity.ERROR, self.code, self.message, where)


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.is_error for d in diagnostics)
