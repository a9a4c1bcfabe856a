"""Parser and formatter for ``.spec`` specogram files.

The file grammar is the textual image of the builder vocabulary, with
the underscores of call names restored to spaces and ``.`` standing in
for the terminal ``period()``::

    specification clock_specification

    requirement requirement_1 states that execution of "clock.tick"
      does not change "clock.hour"
      for clock of type CLOCK
      if in the beginning "clock.minute < 59".

Line breaks and indentation are insignificant between tokens, ``--``
starts a comment running to the end of the line, and quoted fragments
must close on the line they open.  Parsing a well-formed file yields
exactly the specification the equivalent builder chain would produce.

Errors do not abort the parse: each one becomes a positioned
:class:`~specogram.diagnostics.Diagnostic`, the parser resynchronizes at
the next ``.``, and every well-formed requirement still lands in the
returned (partial) specification.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import (
    DUPLICATE_BINDING,
    DUPLICATE_LABEL,
    SYNTAX_ERROR,
    UNBOUND_VARIABLE,
    Diagnostic,
    Severity,
    SourceSpan,
    SpecogramError,
)
from .fragments import free_roots, parse_bool_expr, parse_call, parse_query, render
from .identifiers import validate_identifier
from .model import (
    Decrements,
    DoesNotChange,
    Increments,
    Requirement,
    Specification,
    VariableBinding,
    is_trivially_true,
)

_EFFECT_OPENERS = ("does", "increments", "decrements")


@dataclass
class ParseResult:
    """Outcome of parsing one specogram file.

    ``specification`` is None when the header itself is unusable;
    otherwise it holds every well-formed requirement even if others
    failed.  ``requirement_spans`` locates each accepted requirement's
    label for later cross-checks (for example against a domain model).
    """

    specification: Specification | None
    diagnostics: list[Diagnostic] = field(default_factory=list)
    requirement_spans: dict[str, SourceSpan] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.specification is not None and not any(d.is_error for d in self.diagnostics)


# ---------------------------------------------------------------------------
# Lexer


@dataclass(frozen=True)
class _Token:
    kind: str  # WORD | STRING | PERIOD | EOF
    text: str
    line: int
    col: int

    def span(self, file_name: str) -> SourceSpan:
        return SourceSpan(file_name, self.line, self.col, len(self.text))


def _is_word_char(ch: str) -> bool:
    return ch == "_" or "a" <= ch <= "z" or "A" <= ch <= "Z" or "0" <= ch <= "9"


def _lex(text: str, file_name: str) -> list[_Token]:
    """Tokenize a specogram file.

    Unexpected characters and unterminated quotes become JUNK tokens so
    the parser rejects the requirement that contains them and recovers
    at its terminating ``.``.
    """
    tokens: list[_Token] = []
    lines = text.split("\n")
    for line_index, line in enumerate(lines):
        line_no = line_index + 1
        i = 0
        n = len(line)
        while i < n:
            ch = line[i]
            if ch in " \t\r":
                i += 1
                continue
            if ch == "-" and i + 1 < n and line[i + 1] == "-":
                break  # comment until end of line
            col = i + 1
            if _is_word_char(ch):
                start = i
                while i < n and _is_word_char(line[i]):
                    i += 1
                tokens.append(_Token("WORD", line[start:i], line_no, col))
            elif ch == '"':
                end = line.find('"', i + 1)
                if end == -1:
                    tokens.append(_Token("JUNK", line[i:], line_no, col))
                    i = n
                else:
                    tokens.append(_Token("STRING", line[i + 1 : end], line_no, col))
                    i = end + 1
            elif ch == ".":
                tokens.append(_Token("PERIOD", ".", line_no, col))
                i += 1
            else:
                start = i
                while i < n and line[i] not in ' \t\r".' and not _is_word_char(line[i]):
                    i += 1
                tokens.append(_Token("JUNK", line[start:i], line_no, col))
    last_line = len(lines)
    last_col = len(lines[-1]) + 1
    tokens.append(_Token("EOF", "", last_line, last_col))
    return tokens


# ---------------------------------------------------------------------------
# Parser


class _SyntaxFailure(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


class _Cursor:
    def __init__(self, tokens: list[_Token], file_name: str):
        self.tokens = tokens
        self.i = 0
        self.file_name = file_name

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        token = self.tokens[self.i]
        if token.kind != "EOF":
            self.i += 1
        return token

    def at_word(self, text: str) -> bool:
        token = self.peek()
        return token.kind == "WORD" and token.text == text

    def fail(self, message: str, token: _Token, code: str = SYNTAX_ERROR) -> _SyntaxFailure:
        return _SyntaxFailure(
            Diagnostic(Severity.ERROR, code, message, token.span(self.file_name))
        )

    def expect_word(self, text: str) -> _Token:
        token = self.peek()
        if token.kind != "WORD" or token.text != text:
            raise self.fail(f"expected {text!r}, found {_show(token)}", token)
        return self.advance()

    def expect_any_word(self, description: str) -> _Token:
        token = self.peek()
        if token.kind != "WORD":
            raise self.fail(f"expected {description}, found {_show(token)}", token)
        return self.advance()

    def expect_string(self, description: str) -> _Token:
        token = self.peek()
        if token.kind != "STRING":
            raise self.fail(f'expected a quoted {description}, found {_show(token)}', token)
        return self.advance()

    def expect_period(self) -> None:
        token = self.peek()
        if token.kind != "PERIOD":
            raise self.fail(f"expected '.', found {_show(token)}", token)
        self.advance()

    def skip_past_period(self) -> None:
        while True:
            token = self.advance()
            if token.kind in ("PERIOD", "EOF"):
                return


def _show(token: _Token) -> str:
    if token.kind == "EOF":
        return "end of file"
    if token.kind == "STRING":
        return f'"{token.text}"'
    if token.kind == "JUNK" and token.text.startswith('"'):
        return "an unterminated quote"
    return f"{token.text!r}"


def _identifier_from(cursor: _Cursor, token: _Token, role: str) -> str:
    try:
        return validate_identifier(token.text)
    except SpecogramError as error:
        span = SourceSpan(
            cursor.file_name, token.line, token.col + (error.offset or 0), 1
        )
        raise _SyntaxFailure(
            Diagnostic(Severity.ERROR, error.code, f"bad {role}: {error.message}", span)
        ) from error


def _fragment_from(cursor: _Cursor, token: _Token, role: str, parse):
    try:
        return parse(token.text)
    except SpecogramError as error:
        # +1 skips the opening quote.
        span = SourceSpan(
            cursor.file_name, token.line, token.col + 1 + (error.offset or 0), 1
        )
        raise _SyntaxFailure(
            Diagnostic(Severity.ERROR, error.code, f"bad {role} fragment: {error.message}", span)
        ) from error


def _parse_requirement(cursor: _Cursor) -> tuple[Requirement, _Token]:
    cursor.expect_word("requirement")
    label_token = cursor.expect_any_word("a requirement label")
    label = _identifier_from(cursor, label_token, "requirement label")
    for word in ("states", "that", "execution", "of"):
        cursor.expect_word(word)
    action_token = cursor.expect_string("call")
    action = _fragment_from(cursor, action_token, "action", parse_call)

    opener = cursor.expect_any_word("an effect phrase (does not change / increments / decrements)")
    if opener.text == "does":
        cursor.expect_word("not")
        cursor.expect_word("change")
        effect_kind = DoesNotChange
    elif opener.text == "increments":
        effect_kind = Increments
    elif opener.text == "decrements":
        effect_kind = Decrements
    else:
        raise cursor.fail(
            f"expected one of {', '.join(_EFFECT_OPENERS)}, found {_show(opener)}", opener
        )
    target_token = cursor.expect_string("query")
    effect = effect_kind(_fragment_from(cursor, target_token, "target", parse_query))

    bindings: list[VariableBinding] = []
    cursor.expect_word("for")
    guard = None
    guard_token = None
    while True:
        variable_token = cursor.expect_any_word("a variable name")
        variable = _identifier_from(cursor, variable_token, "variable name")
        if any(binding.variable == variable for binding in bindings):
            raise _SyntaxFailure(
                Diagnostic(
                    Severity.ERROR,
                    DUPLICATE_BINDING,
                    f"variable {variable!r} is already bound in requirement {label!r}",
                    variable_token.span(cursor.file_name),
                )
            )
        cursor.expect_word("of")
        cursor.expect_word("type")
        type_token = cursor.expect_any_word("a type name")
        bindings.append(
            VariableBinding(variable, _identifier_from(cursor, type_token, "type name"))
        )
        if cursor.at_word("for"):
            cursor.advance()
            continue
        break
    if cursor.at_word("if"):
        cursor.advance()
        for word in ("in", "the", "beginning"):
            cursor.expect_word(word)
        guard_token = cursor.expect_string("condition")
        guard = _fragment_from(cursor, guard_token, "guard", parse_bool_expr)
    cursor.expect_period()

    bound = {binding.variable for binding in bindings}
    fragment_tokens = [(action, action_token), (effect.target, target_token)]
    if guard is not None:
        fragment_tokens.append((guard, guard_token))
    for node, token in fragment_tokens:
        unbound = sorted(free_roots(node) - bound)
        if unbound:
            raise _SyntaxFailure(
                Diagnostic(
                    Severity.ERROR,
                    UNBOUND_VARIABLE,
                    f"unbound variable(s) in requirement {label!r}: {', '.join(unbound)}",
                    token.span(cursor.file_name),
                )
            )

    return Requirement(label, action, effect, tuple(bindings), guard), label_token


def parse_specogram(text: str, file_name: str = "<specogram>") -> ParseResult:
    """Parse a specogram file into a specification plus diagnostics.

    Each malformed requirement yields at least one error diagnostic and
    is skipped (resynchronizing after its terminating ``.``); the
    well-formed ones are all kept.
    """
    tokens = _lex(text, file_name)
    cursor = _Cursor(tokens, file_name)
    diagnostics: list[Diagnostic] = []
    result = ParseResult(specification=None, diagnostics=diagnostics)

    spec_name = None
    token = cursor.peek()
    if token.kind == "WORD" and token.text == "specification":
        cursor.advance()
        try:
            name_token = cursor.expect_any_word("a specification name")
            spec_name = _identifier_from(cursor, name_token, "specification name")
        except _SyntaxFailure as failure:
            diagnostics.append(failure.diagnostic)
    else:
        diagnostics.append(
            Diagnostic(
                Severity.ERROR,
                SYNTAX_ERROR,
                f"expected 'specification <name>' header, found {_show(token)}",
                token.span(file_name),
            )
        )

    requirements: list[Requirement] = []
    spans: dict[str, SourceSpan] = {}
    while cursor.peek().kind != "EOF":
        if not cursor.at_word("requirement"):
            token = cursor.peek()
            diagnostics.append(
                Diagnostic(
                    Severity.ERROR,
                    SYNTAX_ERROR,
                    f"expected 'requirement', found {_show(token)}",
                    token.span(file_name),
                )
            )
            cursor.skip_past_period()
            continue
        try:
            requirement, label_token = _parse_requirement(cursor)
        except _SyntaxFailure as failure:
            diagnostics.append(failure.diagnostic)
            cursor.skip_past_period()
            continue
        if any(existing.label == requirement.label for existing in requirements):
            diagnostics.append(
                Diagnostic(
                    Severity.ERROR,
                    DUPLICATE_LABEL,
                    f"duplicate requirement label {requirement.label!r}",
                    label_token.span(file_name),
                )
            )
            continue
        requirements.append(requirement)
        spans[requirement.label] = label_token.span(file_name)

    if spec_name is not None:
        result.specification = Specification(spec_name, tuple(requirements))
        result.requirement_spans = spans
    return result


# ---------------------------------------------------------------------------
# Formatter


def format_specogram(spec: Specification) -> str:
    """Canonical layout: one clause per line, two-space continuation
    indent, the terminating ``.`` glued to the final clause."""
    lines = [f"specification {spec.name}"]
    for requirement in spec.requirements:
        lines.append("")
        clause_lines = [
            f'requirement {requirement.label} states that execution of "{render(requirement.action)}"',
            f'  {requirement.effect.phrase} "{render(requirement.effect.target)}"',
        ]
        for binding in requirement.bindings:
            clause_lines.append(f"  for {binding.variable} of type {binding.declared_type}")
        if requirement.guard is not None:
            clause_lines.append(f'  if in the beginning "{render(requirement.guard)}"')
        clause_lines[-1] += "."
        lines.extend(clause_lines)
    return "\n".join(lines) + "\n"
