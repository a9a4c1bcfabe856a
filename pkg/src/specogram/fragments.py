"""Parser and pretty-printer for the quoted domain fragments.

Three kinds of fragment appear inside a requirement: the action being
executed (``clock.tick``), the queries it talks about (``clock.hour``),
and the boolean guard (``clock.minute < 59``).  This module turns each
into an AST and renders ASTs back to text such that parsing the rendered
form reproduces the AST exactly.

Grammar, loosest to tightest binding::

    bool        = conjunction  ('or' conjunction)*
    conjunction = bool-operand ('and' bool-operand)*
    bool-operand= comparison | bool-primary
    bool-primary= 'not' bool-primary | 'True' | 'False' | '(' bool ')'
    comparison  = arith ('<' | '<=' | '>' | '>=' | '=' | '/=') arith
    arith       = arith-term (('+' | '-') arith-term)*
    arith-term  = integer | query-path | '(' arith ')'
    query-path  = identifier ('.' identifier)+

Consequences worth spelling out: ``not`` takes a boolean primary, so
``not clock.ready < 1`` is rejected while ``not ( a.x < 1 )`` parses; a
bare variable is never a value (values are reached through at least one
dot); there is no unary minus, negative constants are written ``0 - n``.
``and``, ``or``, ``not``, ``True``, and ``False`` are reserved words.
Whitespace between tokens is insignificant and fragments contain no
comments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from .diagnostics import (
    DANGLING_OPERAND,
    ILLEGAL_IDENTIFIER,
    INTEGER_OVERFLOW,
    MISSING_DOT,
    TRAILING_GARBAGE,
    UNBALANCED_PARENTHESIS,
    UNKNOWN_OPERATOR,
    SpecogramError,
)
from .identifiers import validate_identifier

MAX_INT = 2**63 - 1
COMPARISON_OPS = ("<", "<=", ">", ">=", "=", "/=")

_MAX_NESTING = 200


def _validated_path(root: str, path: tuple[str, ...]) -> None:
    validate_identifier(root)
    if not path:
        raise SpecogramError(MISSING_DOT, "a path needs at least one dotted feature")
    for segment in path:
        validate_identifier(segment)


@dataclass(frozen=True)
class QualifiedCall:
    """A command invocation such as ``clock.tick``: a target and a feature chain."""

    root: str
    path: tuple[str, ...]

    def __post_init__(self) -> None:
        _validated_path(self.root, self.path)

    @property
    def dotted(self) -> str:
        return ".".join((self.root, *self.path))


@dataclass(frozen=True)
class QueryPath:
    """A value-yielding path such as ``clock.hour``; same shape, different role."""

    root: str
    path: tuple[str, ...]

    def __post_init__(self) -> None:
        _validated_path(self.root, self.path)

    @property
    def dotted(self) -> str:
        return ".".join((self.root, *self.path))


@dataclass(frozen=True)
class IntLiteral:
    value: int

    def __post_init__(self) -> None:
        if not 0 <= self.value <= MAX_INT:
            raise SpecogramError(
                INTEGER_OVERFLOW,
                f"integer literal {self.value} outside the renderable 0..{MAX_INT} range",
            )


@dataclass(frozen=True)
class QueryRef:
    path: QueryPath


@dataclass(frozen=True)
class Add:
    left: "Arith"
    right: "Arith"


@dataclass(frozen=True)
class Sub:
    left: "Arith"
    right: "Arith"


Arith = Union[IntLiteral, QueryRef, Add, Sub]


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Comparison:
    left: Arith
    op: str
    right: Arith

    def __post_init__(self) -> None:
        if self.op not in COMPARISON_OPS:
            raise SpecogramError(UNKNOWN_OPERATOR, f"{self.op!r} is not a comparison operator")


@dataclass(frozen=True)
class And:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Or:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Not:
    operand: "BoolExpr"


BoolExpr = Union[BoolLit, Comparison, And, Or, Not]
Fragment = Union[QualifiedCall, QueryPath, BoolExpr]


# ---------------------------------------------------------------------------
# Lexer


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    offset: int


_KEYWORDS = {"and": "AND", "or": "OR", "not": "NOT", "True": "TRUE", "False": "FALSE"}
_RELOP_KINDS = {"<": "LT", "<=": "LE", ">": "GT", ">=": "GE", "=": "EQ", "/=": "NE"}


def _is_letter(ch: str) -> bool:
    return "a" <= ch <= "z" or "A" <= ch <= "Z"


def _is_digit(ch: str) -> bool:
    return "0" <= ch <= "9"


def _lex(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        start = i
        if _is_letter(ch) or ch == "_":
            while i < n and (_is_letter(text[i]) or _is_digit(text[i]) or text[i] == "_"):
                i += 1
            word = text[start:i]
            if word[0] == "_":
                raise SpecogramError(
                    ILLEGAL_IDENTIFIER,
                    f"identifier {word!r} may not start with an underscore",
                    offset=start,
                )
            tokens.append(_Token(_KEYWORDS.get(word, "IDENT"), word, start))
        elif _is_digit(ch):
            while i < n and _is_digit(text[i]):
                i += 1
            tokens.append(_Token("INT", text[start:i], start))
        elif ch in "<>":
            if i + 1 < n and text[i + 1] == "=":
                i += 2
            else:
                i += 1
            op = text[start:i]
            tokens.append(_Token(_RELOP_KINDS[op], op, start))
        elif ch == "=":
            tokens.append(_Token("EQ", "=", start))
            i += 1
        elif ch == "/":
            if i + 1 < n and text[i + 1] == "=":
                tokens.append(_Token("NE", "/=", start))
                i += 2
            else:
                raise SpecogramError(UNKNOWN_OPERATOR, "'/' is not an operator (did you mean '/='?)", offset=start)
        elif ch == "+":
            tokens.append(_Token("PLUS", "+", start))
            i += 1
        elif ch == "-":
            tokens.append(_Token("MINUS", "-", start))
            i += 1
        elif ch == ".":
            tokens.append(_Token("DOT", ".", start))
            i += 1
        elif ch == "(":
            tokens.append(_Token("LPAREN", "(", start))
            i += 1
        elif ch == ")":
            tokens.append(_Token("RPAREN", ")", start))
            i += 1
        else:
            raise SpecogramError(UNKNOWN_OPERATOR, f"unknown character {ch!r}", offset=start)
    return tokens


# ---------------------------------------------------------------------------
# Parser


def _describe(token: _Token | None) -> str:
    return "end of input" if token is None else f"{token.text!r}"


class _Parser:
    def __init__(self, tokens: list[_Token], length: int):
        self.tokens = tokens
        self.i = 0
        self.length = length
        self.nesting = 0

    def peek(self) -> _Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def offset(self) -> int:
        token = self.peek()
        return self.length if token is None else token.offset

    def at(self, *kinds: str) -> bool:
        token = self.peek()
        return token is not None and token.kind in kinds

    def advance(self) -> _Token:
        token = self.tokens[self.i]
        self.i += 1
        return token

    def _enter(self) -> None:
        self.nesting += 1
        if self.nesting > _MAX_NESTING:
            raise SpecogramError(
                UNBALANCED_PARENTHESIS,
                f"expression nested deeper than {_MAX_NESTING} levels",
                offset=self.offset(),
            )

    # -- boolean layer

    def parse_bool(self) -> BoolExpr:
        node = self.parse_conjunction()
        while self.at("OR"):
            self.advance()
            node = Or(node, self.parse_conjunction())
        return node

    def parse_conjunction(self) -> BoolExpr:
        node = self.parse_bool_operand()
        while self.at("AND"):
            self.advance()
            node = And(node, self.parse_bool_operand())
        return node

    def parse_bool_operand(self) -> BoolExpr:
        token = self.peek()
        if token is None:
            raise SpecogramError(DANGLING_OPERAND, "expected an expression, found end of input", offset=self.length)
        if token.kind in ("NOT", "TRUE", "FALSE"):
            return self.parse_bool_primary()
        if token.kind in ("INT", "IDENT"):
            return self.parse_comparison()
        if token.kind == "LPAREN":
            # A parenthesis may open the left side of a comparison or a
            # grouped boolean expression; the two never overlap, so try
            # the comparison reading and fall back.
            mark = self.i
            try:
                return self.parse_comparison()
            except SpecogramError as comparison_error:
                self.i = mark
                try:
                    return self.parse_bool_primary()
                except SpecogramError as primary_error:
                    raise _farther(primary_error, comparison_error) from None
        raise SpecogramError(
            DANGLING_OPERAND, f"expected an expression, found {_describe(token)}", offset=token.offset
        )

    def parse_bool_primary(self) -> BoolExpr:
        token = self.peek()
        if token is None:
            raise SpecogramError(DANGLING_OPERAND, "expected an expression, found end of input", offset=self.length)
        if token.kind == "NOT":
            self.advance()
            self._enter()
            operand = self.parse_bool_primary()
            self.nesting -= 1
            return Not(operand)
        if token.kind == "TRUE":
            self.advance()
            return BoolLit(True)
        if token.kind == "FALSE":
            self.advance()
            return BoolLit(False)
        if token.kind == "LPAREN":
            self.advance()
            self._enter()
            node = self.parse_bool()
            self.nesting -= 1
            if not self.at("RPAREN"):
                raise SpecogramError(
                    UNBALANCED_PARENTHESIS,
                    f"expected ')', found {_describe(self.peek())}",
                    offset=self.offset(),
                )
            self.advance()
            return node
        raise SpecogramError(
            DANGLING_OPERAND, f"expected an expression, found {_describe(token)}", offset=token.offset
        )

    def parse_comparison(self) -> Comparison:
        left = self.parse_arith()
        token = self.peek()
        if token is None or token.kind not in _RELOP_KINDS.values():
            raise SpecogramError(
                DANGLING_OPERAND,
                f"expected a comparison operator, found {_describe(token)}",
                offset=self.offset(),
            )
        op = self.advance().text
        right = self.parse_arith()
        return Comparison(left, op, right)

    # -- arithmetic layer

    def parse_arith(self) -> Arith:
        node = self.parse_arith_term()
        while self.at("PLUS", "MINUS"):
            op = self.advance()
            right = self.parse_arith_term()
            node = Add(node, right) if op.kind == "PLUS" else Sub(node, right)
        return node

    def parse_arith_term(self) -> Arith:
        token = self.peek()
        if token is None:
            raise SpecogramError(DANGLING_OPERAND, "expected a value, found end of input", offset=self.length)
        if token.kind == "INT":
            self.advance()
            value = int(token.text)
            if value > MAX_INT:
                raise SpecogramError(
                    INTEGER_OVERFLOW,
                    f"integer literal {token.text} exceeds the 64-bit signed range",
                    offset=token.offset,
                )
            return IntLiteral(value)
        if token.kind == "IDENT":
            return QueryRef(self.parse_path())
        if token.kind == "LPAREN":
            self.advance()
            self._enter()
            node = self.parse_arith()
            self.nesting -= 1
            if not self.at("RPAREN"):
                raise SpecogramError(
                    UNBALANCED_PARENTHESIS,
                    f"expected ')', found {_describe(self.peek())}",
                    offset=self.offset(),
                )
            self.advance()
            return node
        raise SpecogramError(DANGLING_OPERAND, f"expected a value, found {_describe(token)}", offset=token.offset)

    # -- paths

    def parse_path(self) -> QueryPath:
        token = self.peek()
        if token is None or token.kind != "IDENT":
            raise SpecogramError(
                ILLEGAL_IDENTIFIER, f"expected an identifier, found {_describe(token)}", offset=self.offset()
            )
        root = self.advance().text
        segments: list[str] = []
        while self.at("DOT"):
            self.advance()
            token = self.peek()
            if token is None or token.kind != "IDENT":
                raise SpecogramError(
                    ILLEGAL_IDENTIFIER,
                    f"expected an identifier after '.', found {_describe(token)}",
                    offset=self.offset(),
                )
            segments.append(self.advance().text)
        if not segments:
            raise SpecogramError(
                MISSING_DOT, f"expected '.' after {root!r} (a path needs a feature)", offset=self.offset()
            )
        return QueryPath(root, tuple(segments))


def _farther(first: SpecogramError, second: SpecogramError) -> SpecogramError:
    a = -1 if first.offset is None else first.offset
    b = -1 if second.offset is None else second.offset
    return first if a >= b else second


def _finish(parser: _Parser) -> None:
    token = parser.peek()
    if token is not None:
        raise SpecogramError(TRAILING_GARBAGE, f"unexpected {token.text!r} after the expression", offset=token.offset)


def parse_call(text: str) -> QualifiedCall:
    """Parse a qualified call fragment such as ``"clock.tick"``."""
    parser = _Parser(_lex(text), len(text))
    path = parser.parse_path()
    _finish(parser)
    return QualifiedCall(path.root, path.path)


def parse_query(text: str) -> QueryPath:
    """Parse a value-yielding path fragment such as ``"clock.hour"``."""
    parser = _Parser(_lex(text), len(text))
    path = parser.parse_path()
    _finish(parser)
    return path


def parse_bool_expr(text: str) -> BoolExpr:
    """Parse a guard fragment such as ``"clock.minute < 59"``."""
    parser = _Parser(_lex(text), len(text))
    node = parser.parse_bool()
    _finish(parser)
    return node


# ---------------------------------------------------------------------------
# Queries over ASTs


def free_roots(node: Fragment | Arith) -> set[str]:
    """The set of root identifiers of every call or query reference in ``node``."""
    if isinstance(node, (QualifiedCall, QueryPath)):
        return {node.root}
    if isinstance(node, QueryRef):
        return {node.path.root}
    if isinstance(node, (IntLiteral, BoolLit)):
        return set()
    if isinstance(node, (Add, Sub, And, Or)):
        return free_roots(node.left) | free_roots(node.right)
    if isinstance(node, Comparison):
        return free_roots(node.left) | free_roots(node.right)
    if isinstance(node, Not):
        return free_roots(node.operand)
    raise TypeError(f"not a fragment node: {node!r}")


# ---------------------------------------------------------------------------
# Pretty-printer

# Binding strength of a boolean node; a child is parenthesized when its
# strength is below what its position requires.
_OR_LEVEL = 1
_AND_LEVEL = 2
_COMPARISON_LEVEL = 3
_PRIMARY_LEVEL = 4

QueryText = Callable[[QueryPath], str]


def _bool_level(node: BoolExpr) -> int:
    if isinstance(node, Or):
        return _OR_LEVEL
    if isinstance(node, And):
        return _AND_LEVEL
    if isinstance(node, Comparison):
        return _COMPARISON_LEVEL
    return _PRIMARY_LEVEL


def _render_bool(node: BoolExpr, minimum: int, query_text: QueryText) -> str:
    text = _render_bool_bare(node, query_text)
    if _bool_level(node) < minimum:
        return f"( {text} )"
    return text


def _render_bool_bare(node: BoolExpr, query_text: QueryText) -> str:
    if isinstance(node, BoolLit):
        return "True" if node.value else "False"
    if isinstance(node, Not):
        return f"not {_render_bool(node.operand, _PRIMARY_LEVEL, query_text)}"
    if isinstance(node, Comparison):
        left = _render_arith(node.left, 1, query_text)
        right = _render_arith(node.right, 1, query_text)
        return f"{left} {node.op} {right}"
    if isinstance(node, And):
        left = _render_bool(node.left, _AND_LEVEL, query_text)
        right = _render_bool(node.right, _COMPARISON_LEVEL, query_text)
        return f"{left} and {right}"
    if isinstance(node, Or):
        left = _render_bool(node.left, _OR_LEVEL, query_text)
        right = _render_bool(node.right, _AND_LEVEL, query_text)
        return f"{left} or {right}"
    raise TypeError(f"not a boolean node: {node!r}")


def _render_arith(node: Arith, minimum: int, query_text: QueryText) -> str:
    if isinstance(node, IntLiteral):
        return str(node.value)
    if isinstance(node, QueryRef):
        return query_text(node.path)
    if isinstance(node, (Add, Sub)):
        op = "+" if isinstance(node, Add) else "-"
        left = _render_arith(node.left, 1, query_text)
        right = _render_arith(node.right, 2, query_text)
        text = f"{left} {op} {right}"
        return f"( {text} )" if minimum > 1 else text
    raise TypeError(f"not an arithmetic node: {node!r}")


def render(node: Fragment | Arith, *, query_text: QueryText | None = None) -> str:
    """Render a fragment AST back to its single-space-separated text form.

    Parentheses appear only where precedence demands them, so rendering
    then parsing reproduces the AST.  ``query_text`` substitutes a custom
    spelling for every query path (used by view emitters to strip variable
    prefixes or add pre-state markers).
    """
    if query_text is None:
        query_text = lambda path: path.dotted  # noqa: E731
    if isinstance(node, (QualifiedCall, QueryPath)):
        return query_text(node) if isinstance(node, QueryPath) else node.dotted
    if isinstance(node, (IntLiteral, QueryRef, Add, Sub)):
        return _render_arith(node, 1, query_text)
    return _render_bool(node, _OR_LEVEL, query_text)
