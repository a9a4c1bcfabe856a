"""The specification data model and its canonical persistence.

A :class:`Specification` is a named, ordered collection of
:class:`Requirement` values.  Each requirement couples an action (a
qualified call), an effect on one observable query, the typed variables
it talks about, and an optional guard restricting the initial states it
applies to.  Everything is immutable after construction, so model values
can be shared freely; updates build new values.

The canonical text format is a line-oriented key/value document with one
requirement per block and fields in fixed order.  It is deterministic:
the same specification always serializes to byte-identical text, and
parsing canonical text reproduces the model exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Union

from . import fragments
from .diagnostics import (
    DUPLICATE_BINDING,
    DUPLICATE_LABEL,
    MALFORMED_DOCUMENT,
    SCHEMA_VIOLATION,
    UNBOUND_VARIABLE,
    SourceSpan,
    SpecogramError,
)
from .fragments import BoolExpr, BoolLit, QualifiedCall, QueryPath, free_roots, render
from .identifiers import validate_identifier

EFFECT_KEYWORDS = ("does_not_change", "increments", "decrements")


@dataclass(frozen=True)
class VariableBinding:
    variable: str
    declared_type: str

    def __post_init__(self) -> None:
        validate_identifier(self.variable)
        validate_identifier(self.declared_type)


@dataclass(frozen=True)
class DoesNotChange:
    target: QueryPath

    keyword = "does_not_change"
    phrase = "does not change"


@dataclass(frozen=True)
class Increments:
    """New value of the target query is its old value plus one."""

    target: QueryPath

    keyword = "increments"
    phrase = "increments"


@dataclass(frozen=True)
class Decrements:
    """New value of the target query is its old value minus one."""

    target: QueryPath

    keyword = "decrements"
    phrase = "decrements"


EffectKind = Union[DoesNotChange, Increments, Decrements]

_EFFECTS_BY_KEYWORD = {
    DoesNotChange.keyword: DoesNotChange,
    Increments.keyword: Increments,
    Decrements.keyword: Decrements,
}


def is_trivially_true(guard: BoolExpr | None) -> bool:
    """An absent guard and a literal ``True`` guard both mean "always applies"."""
    return guard is None or guard == BoolLit(True)


@dataclass(frozen=True)
class Requirement:
    label: str
    action: QualifiedCall
    effect: EffectKind
    bindings: tuple[VariableBinding, ...]
    guard: BoolExpr | None = None

    def __post_init__(self) -> None:
        validate_identifier(self.label)
        object.__setattr__(self, "bindings", tuple(self.bindings))
        if not self.bindings:
            raise SpecogramError(SCHEMA_VIOLATION, f"requirement {self.label!r} binds no variables")
        seen: set[str] = set()
        for binding in self.bindings:
            if binding.variable in seen:
                raise SpecogramError(
                    DUPLICATE_BINDING,
                    f"variable {binding.variable!r} bound twice in requirement {self.label!r}",
                )
            seen.add(binding.variable)
        unbound = sorted(self.free_roots() - seen)
        if unbound:
            raise SpecogramError(
                UNBOUND_VARIABLE,
                f"unbound variable(s) in requirement {self.label!r}: {', '.join(unbound)}",
            )

    def free_roots(self) -> set[str]:
        roots = free_roots(self.action) | free_roots(self.effect.target)
        if self.guard is not None:
            roots |= free_roots(self.guard)
        return roots

    @property
    def bound_variables(self) -> tuple[str, ...]:
        return tuple(binding.variable for binding in self.bindings)


@dataclass(frozen=True)
class Specification:
    name: str
    requirements: tuple[Requirement, ...] = ()

    def __post_init__(self) -> None:
        validate_identifier(self.name)
        object.__setattr__(self, "requirements", tuple(self.requirements))
        seen: set[str] = set()
        for requirement in self.requirements:
            if requirement.label in seen:
                raise SpecogramError(
                    DUPLICATE_LABEL, f"duplicate requirement label {requirement.label!r}"
                )
            seen.add(requirement.label)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(requirement.label for requirement in self.requirements)


def add_requirement(spec: Specification, requirement: Requirement) -> Specification:
    """A new specification with ``requirement`` appended; rejects duplicate labels."""
    if requirement.label in spec.labels:
        raise SpecogramError(
            DUPLICATE_LABEL,
            f"specification {spec.name!r} already has a requirement labelled {requirement.label!r}",
        )
    return replace(spec, requirements=spec.requirements + (requirement,))


# ---------------------------------------------------------------------------
# Canonical persistence


def to_canonical_text(spec: Specification) -> str:
    lines = [f"specification: {spec.name}"]
    for requirement in spec.requirements:
        lines.append("")
        lines.append(f"requirement: {requirement.label}")
        lines.append(f"action: {render(requirement.action)}")
        lines.append(f"effect: {requirement.effect.keyword}")
        lines.append(f"target: {render(requirement.effect.target)}")
        for binding in requirement.bindings:
            lines.append(f"binding: {binding.variable} : {binding.declared_type}")
        if requirement.guard is not None:
            lines.append(f"guard: {render(requirement.guard)}")
    return "\n".join(lines) + "\n"


class _Lines:
    """Cursor over document lines; ``line_no`` is 1-based for spans."""

    def __init__(self, text: str, file_name: str):
        self.lines = text.split("\n")
        self.index = 0
        self.file_name = file_name

    def peek(self) -> str | None:
        return self.lines[self.index] if self.index < len(self.lines) else None

    def advance(self) -> None:
        self.index += 1

    def skip_blank(self) -> None:
        while self.peek() == "":
            self.advance()

    @property
    def line_no(self) -> int:
        return self.index + 1

    def fail(self, code: str, message: str, line_no: int | None = None, column: int = 1) -> SpecogramError:
        at = self.line_no if line_no is None else line_no
        return SpecogramError(
            code, f"{message} (line {at})", span=SourceSpan(self.file_name, at, column)
        )


def _take_field(lines: _Lines, key: str, *, required_by: str) -> tuple[str, int]:
    """Consume a ``key: value`` line; returns the value and its line number."""
    line = lines.peek()
    prefix = f"{key}: "
    if line is None or line == "" or not line.startswith(prefix):
        raise lines.fail(SCHEMA_VIOLATION, f"expected field {key!r} in {required_by}")
    line_no = lines.line_no
    lines.advance()
    return line[len(prefix) :], line_no


def _parse_fragment(lines: _Lines, key: str, text: str, line_no: int, parse):
    try:
        return parse(text)
    except SpecogramError as error:
        column = len(key) + 3 + (error.offset or 0)
        raise lines.fail(
            MALFORMED_DOCUMENT, f"bad {key} fragment: {error.message}", line_no, column
        ) from error


def from_canonical_text(text: str, file_name: str = "<canonical>") -> Specification:
    """Parse a canonical specification document back into a model.

    Raises :class:`SpecogramError` carrying a span locating the problem.
    """
    lines = _Lines(text, file_name)
    lines.skip_blank()
    name, name_line = _take_field(lines, "specification", required_by="the document header")
    try:
        validate_identifier(name)
    except SpecogramError as error:
        raise lines.fail(
            MALFORMED_DOCUMENT, f"bad specification name: {error.message}", name_line
        ) from error

    requirements: list[Requirement] = []
    while True:
        lines.skip_blank()
        if lines.peek() is None:
            break
        requirements.append(_parse_block(lines))

    try:
        return Specification(name, tuple(requirements))
    except SpecogramError as error:
        raise lines.fail(error.code, error.message, name_line) from error


def _parse_block(lines: _Lines) -> Requirement:
    start_line = lines.line_no
    label, label_line = _take_field(lines, "requirement", required_by="a requirement block")
    try:
        validate_identifier(label)
    except SpecogramError as error:
        raise lines.fail(
            MALFORMED_DOCUMENT, f"bad requirement label: {error.message}", label_line
        ) from error

    block = f"requirement {label!r}"
    action_text, action_line = _take_field(lines, "action", required_by=block)
    action = _parse_fragment(lines, "action", action_text, action_line, fragments.parse_call)
    effect_keyword, effect_line = _take_field(lines, "effect", required_by=block)
    if effect_keyword not in _EFFECTS_BY_KEYWORD:
        raise lines.fail(
            MALFORMED_DOCUMENT,
            f"effect must be one of {', '.join(EFFECT_KEYWORDS)}, not {effect_keyword!r}",
            effect_line,
        )
    target_text, target_line = _take_field(lines, "target", required_by=block)
    target = _parse_fragment(lines, "target", target_text, target_line, fragments.parse_query)
    effect = _EFFECTS_BY_KEYWORD[effect_keyword](target)

    bindings: list[VariableBinding] = []
    while True:
        line = lines.peek()
        if line is None or not line.startswith("binding: "):
            break
        binding_line = lines.line_no
        lines.advance()
        parts = line[len("binding: ") :].split(" : ")
        if len(parts) != 2:
            raise lines.fail(
                MALFORMED_DOCUMENT, "binding must be written '<variable> : <TYPE>'", binding_line
            )
        try:
            bindings.append(VariableBinding(parts[0], parts[1]))
        except SpecogramError as error:
            raise lines.fail(
                MALFORMED_DOCUMENT, f"bad binding: {error.message}", binding_line
            ) from error
    if not bindings:
        raise lines.fail(SCHEMA_VIOLATION, f"expected field 'binding' in {block}")

    guard: BoolExpr | None = None
    line = lines.peek()
    if line is not None and line.startswith("guard: "):
        guard_line = lines.line_no
        lines.advance()
        guard = _parse_fragment(
            lines, "guard", line[len("guard: ") :], guard_line, fragments.parse_bool_expr
        )

    line = lines.peek()
    if line is not None and line != "":
        raise lines.fail(MALFORMED_DOCUMENT, f"unexpected line inside {block}")

    try:
        return Requirement(label, action, effect, tuple(bindings), guard)
    except SpecogramError as error:
        raise lines.fail(error.code, error.message, start_line) from error
