"""Generation of the consistent-by-construction specification views.

Four views derive from one :class:`~specogram.model.Specification`:

* ``latex``     - a natural-language document with one entry per requirement,
* ``puts``      - a class of seamless parameterized unit tests, one
                  ``check_<label>`` routine per requirement, readable top to
                  bottom as a phrase through interleaved comments,
* ``contracts`` - inferred postcondition skeletons for the acted-on classes,
* ``trace``     - a traceability table linking each label to its sentence,
                  its test routine, and its contract location.

Every emitter is a pure function of the specification (plus options), and
all fragment text in every view is rendered from the same ASTs, so the
views cannot drift apart; regenerating after an edit propagates the fix
everywhere.  Emission is deterministic to the byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .fragments import QueryPath, render
from .model import (
    Decrements,
    DoesNotChange,
    EffectKind,
    Increments,
    Requirement,
    Specification,
    is_trivially_true,
)

VIEW_KINDS = ("latex", "puts", "contracts", "trace")
DEFAULT_VIEWS = ("latex", "puts")


@dataclass(frozen=True)
class EmitOptions:
    frames: bool = False
    views: tuple[str, ...] = DEFAULT_VIEWS
    output_dir: str | Path = "."

    def __post_init__(self) -> None:
        object.__setattr__(self, "views", tuple(self.views))
        if not self.views:
            raise ValueError("at least one view must be selected")
        unknown = [view for view in self.views if view not in VIEW_KINDS]
        if unknown:
            raise ValueError(f"unknown view(s): {', '.join(unknown)} (choose from {', '.join(VIEW_KINDS)})")


@dataclass(frozen=True)
class GeneratedArtifact:
    view: str
    relative_path: str
    content: bytes

    @property
    def text(self) -> str:
        return self.content.decode("utf-8")


def write_artifact(artifact: GeneratedArtifact, output_dir: str | Path) -> Path:
    path = Path(output_dir) / artifact.relative_path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(artifact.content)
    return path


def generate(spec: Specification, options: EmitOptions | None = None) -> list[GeneratedArtifact]:
    """All selected views, in the fixed latex, puts, contracts, trace order."""
    options = options or EmitOptions()
    emitters = {
        "latex": lambda: emit_latex(spec),
        "puts": lambda: emit_puts(spec, options),
        "contracts": lambda: emit_contracts(spec),
        "trace": lambda: emit_trace(spec),
    }
    return [emitters[view]() for view in VIEW_KINDS if view in options.views]


# ---------------------------------------------------------------------------
# Shared sentence forms


def put_routine_name(requirement: Requirement) -> str:
    return f"check_{requirement.label}"


def requirement_sentence(requirement: Requirement, *, math: bool = False) -> str:
    """The one-sentence natural-language reading of a requirement.

    With ``math`` set, fragments are wrapped in ``$...$`` for the
    document view and underscores are escaped.
    """
    wrap = (lambda text: f"${_latex_escape(text)}$") if math else (lambda text: text)
    action = wrap(render(requirement.action))
    target = wrap(render(requirement.effect.target))
    sentence = f"Execution of {action} {requirement.effect.phrase} {target}"
    if not is_trivially_true(requirement.guard):
        sentence += f" if, in the beginning, {wrap(render(requirement.guard))}"
    return sentence + "."


def _latex_escape(text: str) -> str:
    return text.replace("_", r"\_")


# ---------------------------------------------------------------------------
# LaTeX view


def emit_latex(spec: Specification) -> GeneratedArtifact:
    lines = [
        r"\documentclass{article}",
        "",
        r"\begin{document}",
        "",
        r"\begin{description}",
    ]
    for requirement in spec.requirements:
        label = _latex_escape(requirement.label)
        lines.append(rf"\item[{label}:] {requirement_sentence(requirement, math=True)}")
    lines += [r"\end{description}", "", r"\end{document}"]
    content = ("\n".join(lines) + "\n").encode("utf-8")
    return GeneratedArtifact("latex", f"{spec.name}_requirements.tex", content)


# ---------------------------------------------------------------------------
# Seamless parameterized unit tests


def effect_postcondition(effect: EffectKind, *, query_text=None) -> str:
    target = render(effect.target, query_text=query_text)
    if isinstance(effect, DoesNotChange):
        return f"{target} ~ old {target}"
    if isinstance(effect, Increments):
        return f"{target} = old {target} + 1"
    if isinstance(effect, Decrements):
        return f"{target} = old {target} - 1"
    raise TypeError(f"not an effect: {effect!r}")


def put_routine(requirement: Requirement, *, frames: bool = False) -> str:
    """One seamless requirement routine; comments interleave so the whole
    routine reads as the requirement's phrase."""
    guarded = not is_trivially_true(requirement.guard)
    action = render(requirement.action)
    restated = f"-- execution of {action} {requirement.effect.phrase} {render(requirement.effect.target)}"
    lines = [put_routine_name(requirement)]
    if guarded:
        lines.append(restated)
        lines.append(f"-- if in the beginning {render(requirement.guard)} :")
    else:
        lines.append(restated + " :")
    lines.append("-- for any")
    parameters = ", ".join(f"{b.variable}: {b.declared_type}" for b in requirement.bindings)
    lines.append(f"    ({parameters})")
    if frames:
        variables = ", ".join(b.variable for b in requirement.bindings)
        lines.append(f"  modify ({variables})")
    if guarded:
        lines += ["-- which", "  require", "-- that", f"    {render(requirement.guard)}"]
    lines += [
        "  do",
        "-- executing",
        f"    {action}",
        "-- will",
        "  ensure",
        "-- that",
        f"    {effect_postcondition(requirement.effect)}",
        "  end",
    ]
    return "\n".join(lines)


def emit_puts(spec: Specification, options: EmitOptions | None = None) -> GeneratedArtifact:
    options = options or EmitOptions()
    class_name = spec.name.upper()
    parts = [f"class {class_name}", "", "feature -- Seamless requirements", ""]
    for requirement in spec.requirements:
        parts.append(put_routine(requirement, frames=options.frames))
        parts.append("")
    parts.append("end")
    content = ("\n".join(parts) + "\n").encode("utf-8")
    return GeneratedArtifact("puts", f"{spec.name}_puts.e", content)


# ---------------------------------------------------------------------------
# Inferred contracts


@dataclass
class _FeatureContract:
    clauses: list[str] = field(default_factory=list)


def _reducible(requirement: Requirement) -> bool:
    # The reduction rewrites one object's view of the requirement, so it
    # needs a single bound variable and an action directly on it.
    return len(requirement.bindings) == 1 and len(requirement.action.path) == 1


def contract_clause(requirement: Requirement) -> str:
    """The ensure clause a single-variable requirement induces on its action,
    with the bound variable's prefix stripped and the guard moved to the
    pre-state: ``old minute < 59 implies hour ~ old hour``."""
    strip = lambda path: ".".join(path.path)  # noqa: E731
    old_query = lambda path: f"old {strip(path)}"  # noqa: E731
    post = effect_postcondition(requirement.effect, query_text=strip)
    if is_trivially_true(requirement.guard):
        return post
    return f"{render(requirement.guard, query_text=old_query)} implies {post}"


def contract_location(requirement: Requirement) -> str | None:
    """``CLASS.feature`` the requirement's contract lands in, or None when
    no single-variable reduction exists."""
    if not _reducible(requirement):
        return None
    return f"{requirement.bindings[0].declared_type}.{requirement.action.path[0]}"


def emit_contracts(spec: Specification) -> GeneratedArtifact:
    classes: dict[str, dict[str, _FeatureContract]] = {}
    unreduced: list[str] = []
    for requirement in spec.requirements:
        if not _reducible(requirement):
            unreduced.append(requirement.label)
            continue
        class_name = requirement.bindings[0].declared_type
        feature = requirement.action.path[0]
        contract = classes.setdefault(class_name, {}).setdefault(feature, _FeatureContract())
        contract.clauses.append(contract_clause(requirement))

    blocks: list[str] = []
    for class_name, features in classes.items():
        lines = [f"class {class_name}"]
        for feature, contract in features.items():
            lines.append(f"  {feature}")
            lines.append("    do")
            lines.append("    ensure")
            for clause in contract.clauses:
                lines.append(f"      {clause}")
            lines.append("    end")
        lines.append("end")
        blocks.append("\n".join(lines))
    if unreduced:
        lines = ["-- unreduced requirements (no single-variable contract form):"]
        lines += [f"--   {label}" for label in unreduced]
        blocks.append("\n".join(lines))

    content = ("\n\n".join(blocks) + "\n" if blocks else "").encode("utf-8")
    return GeneratedArtifact("contracts", f"{spec.name}_contracts.txt", content)


# ---------------------------------------------------------------------------
# Traceability table


def emit_trace(spec: Specification) -> GeneratedArtifact:
    rows = ["label | sentence | put routine | contract"]
    for requirement in spec.requirements:
        location = contract_location(requirement) or "(unreduced)"
        rows.append(
            " | ".join(
                (
                    requirement.label,
                    requirement_sentence(requirement),
                    put_routine_name(requirement),
                    location,
                )
            )
        )
    content = ("\n".join(rows) + "\n").encode("utf-8")
    return GeneratedArtifact("trace", f"{spec.name}_trace.txt", content)
