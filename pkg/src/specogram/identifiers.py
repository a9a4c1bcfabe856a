"""The lexical rule every name in the toolkit obeys.

An identifier starts with an ASCII letter and continues with ASCII
letters, digits, or underscores.  Labels, variables, type names, and
path segments all share this rule; ``"requirement 1"`` is rejected at
the space while ``"requirement_1"`` is accepted.
"""

from __future__ import annotations

from .diagnostics import (
    EMPTY_INPUT,
    ILLEGAL_CHARACTER,
    ILLEGAL_FIRST_CHARACTER,
    SpecogramError,
)


def _is_ascii_letter(ch: str) -> bool:
    return "a" <= ch <= "z" or "A" <= ch <= "Z"


def _is_ascii_digit(ch: str) -> bool:
    return "0" <= ch <= "9"


def is_identifier(text: str) -> bool:
    try:
        validate_identifier(text)
    except SpecogramError:
        return False
    return True


def validate_identifier(text: str) -> str:
    """Return ``text`` unchanged if it is a well-formed identifier.

    Raises :class:`SpecogramError` with the offset of the first offending
    character otherwise.
    """
    if not text:
        raise SpecogramError(EMPTY_INPUT, "identifier is empty")
    if not _is_ascii_letter(text[0]):
        raise SpecogramError(
            ILLEGAL_FIRST_CHARACTER,
            f"identifier must start with an ASCII letter, not {text[0]!r}",
            offset=0,
        )
    for position in range(1, len(text)):
        ch = text[position]
        if not (_is_ascii_letter(ch) or _is_ascii_digit(ch) or ch == "_"):
            raise SpecogramError(
                ILLEGAL_CHARACTER,
                f"illegal character {ch!r} at position {position} in identifier",
                offset=position,
            )
    return text
