"""The staged fluent vocabulary for authoring requirements in code.

A requirement is written as one chain of calls whose names read as a
structured natural-language phrase::

    spec = specification("clock_specification")
    spec.requirement("requirement_1").states_that_execution_of("clock.tick") \\
        .does_not_change("clock.hour").for_("clock").of_type("CLOCK") \\
        .if_in_the_beginning("clock.minute < 59").period()

Each call returns the next stage object, and every stage exposes only
the grammatically valid continuations, so a structurally invalid
requirement is not expressible.  ``period()`` is the one terminal step:
it returns nothing, registers the finished requirement, and consumes the
chain.  Stages are affine; reusing one that already produced its
successor raises.  Inputs are checked by the call that receives them, so
a malformed label or fragment fails immediately, not at ``period()``;
a failed call does not consume its stage, leaving the chain retryable.

A chain that is started but never finalized registers nothing; the
owning builder reports such chains with :class:`UnfinishedRequirementWarning`
when the specification is built or written out.
"""

from __future__ import annotations

import warnings
from pathlib import Path

from . import views
from .diagnostics import DUPLICATE_BINDING, UNBOUND_VARIABLE, SpecogramError
from .fragments import (
    BoolExpr,
    QualifiedCall,
    free_roots,
    parse_bool_expr,
    parse_call,
    parse_query,
)
from .identifiers import validate_identifier
from .model import (
    Decrements,
    DoesNotChange,
    EffectKind,
    Increments,
    Requirement,
    Specification,
    VariableBinding,
    add_requirement,
)


class UnfinishedRequirementWarning(UserWarning):
    """A requirement chain was abandoned before ``period()``."""


class _ChainState:
    def __init__(self, builder: "SpecificationBuilder", label: str):
        self.builder = builder
        self.label = label
        self.action: QualifiedCall | None = None
        self.effect: EffectKind | None = None
        self.bindings: list[VariableBinding] = []
        self.pending_variable: str | None = None
        self.guard: BoolExpr | None = None
        self.finalized = False


class _Stage:
    __slots__ = ("_state", "_used")

    def __init__(self, state: _ChainState):
        self._state = state
        self._used = False

    def _live_state(self) -> _ChainState:
        if self._used:
            raise RuntimeError("this stage was already consumed; a requirement chain is linear")
        return self._state

    def _consume(self) -> None:
        self._used = True


class Labeled(_Stage):
    """After ``requirement(label)``; the phrase now needs its action."""

    def states_that_execution_of(self, call_text: str) -> "ActionGiven":
        state = self._live_state()
        action = parse_call(call_text)
        self._consume()
        state.action = action
        return ActionGiven(state)


class ActionGiven(_Stage):
    """The action is known; pick the effect the requirement asserts."""

    def does_not_change(self, query_text: str) -> "EffectGiven":
        return self._with_effect(DoesNotChange, query_text)

    def increments(self, query_text: str) -> "EffectGiven":
        return self._with_effect(Increments, query_text)

    def decrements(self, query_text: str) -> "EffectGiven":
        return self._with_effect(Decrements, query_text)

    def _with_effect(self, kind, query_text: str) -> "EffectGiven":
        state = self._live_state()
        effect = kind(parse_query(query_text))
        self._consume()
        state.effect = effect
        return EffectGiven(state)


class EffectGiven(_Stage):
    """The effect is known; at least one variable must now be typed."""

    def for_(self, variable: str) -> "VarNamed":
        return _name_variable(self, variable)


class VarNamed(_Stage):
    """A variable was named; its type must follow."""

    def of_type(self, type_name: str) -> "VarTyped":
        state = self._live_state()
        validate_identifier(type_name)
        self._consume()
        assert state.pending_variable is not None
        state.bindings.append(VariableBinding(state.pending_variable, type_name))
        state.pending_variable = None
        return VarTyped(state)


class VarTyped(_Stage):
    """Bindings are complete so far; bind more, guard, or finalize."""

    def for_(self, variable: str) -> VarNamed:
        return _name_variable(self, variable)

    def if_in_the_beginning(self, expr_text: str) -> "Guarded":
        state = self._live_state()
        guard = parse_bool_expr(expr_text)
        self._consume()
        state.guard = guard
        return Guarded(state)

    def period(self) -> None:
        _finalize(self)


class Guarded(_Stage):
    """Guard in place; the only continuation is the terminal period."""

    def period(self) -> None:
        _finalize(self)


def _name_variable(stage: _Stage, variable: str) -> VarNamed:
    state = stage._live_state()
    validate_identifier(variable)
    if any(binding.variable == variable for binding in state.bindings):
        raise SpecogramError(
            DUPLICATE_BINDING,
            f"variable {variable!r} is already bound in requirement {state.label!r}",
        )
    stage._consume()
    state.pending_variable = variable
    return VarNamed(state)


def _finalize(stage: _Stage) -> None:
    """Register the chain's requirement; the precondition is that every
    root mentioned by the fragments is bound."""
    state = stage._live_state()
    assert state.action is not None and state.effect is not None
    bound = {binding.variable for binding in state.bindings}
    roots = free_roots(state.action) | free_roots(state.effect.target)
    if state.guard is not None:
        roots |= free_roots(state.guard)
    unbound = sorted(roots - bound)
    if unbound:
        raise SpecogramError(
            UNBOUND_VARIABLE,
            f"unbound variable(s) in requirement {state.label!r}: {', '.join(unbound)}",
        )
    requirement = Requirement(
        state.label, state.action, state.effect, tuple(state.bindings), state.guard
    )
    state.builder._register(state, requirement)
    stage._consume()


class SpecificationBuilder:
    """Mutable handle a specogram writes requirements into.

    Thread-unsafe by design: chains are meant to be written top to bottom
    in one place, like the text they mimic.
    """

    def __init__(self, name: str):
        validate_identifier(name)
        self._specification = Specification(name)
        self._open_chains: list[_ChainState] = []

    @property
    def name(self) -> str:
        return self._specification.name

    def requirement(self, label: str) -> Labeled:
        """Open a requirement chain; ``label`` must be a well-formed identifier."""
        validate_identifier(label)
        state = _ChainState(self, label)
        self._open_chains.append(state)
        return Labeled(state)

    def _register(self, state: _ChainState, requirement: Requirement) -> None:
        self._specification = add_requirement(self._specification, requirement)
        state.finalized = True
        self._open_chains.remove(state)

    def build(self) -> Specification:
        """Snapshot the immutable specification registered so far."""
        self._warn_about_open_chains()
        return self._specification

    def writes_seamless_requirements(self, output_dir: str | Path = ".", *, frames: bool = False) -> Path:
        """Write the parameterized-unit-test class view; returns the file path."""
        options = views.EmitOptions(frames=frames, views=("puts",), output_dir=output_dir)
        return views.write_artifact(views.emit_puts(self.build(), options), output_dir)

    def writes_latex(self, output_dir: str | Path = ".") -> Path:
        """Write the natural-language document view; returns the file path."""
        return views.write_artifact(views.emit_latex(self.build()), output_dir)

    def _warn_about_open_chains(self) -> None:
        for state in self._open_chains:
            warnings.warn(
                f"requirement chain {state.label!r} was never finalized with period() "
                "and is not part of the specification",
                UnfinishedRequirementWarning,
                stacklevel=3,
            )


def specification(name: str) -> SpecificationBuilder:
    """Start a new specification, further referred to by ``name``."""
    return SpecificationBuilder(name)
