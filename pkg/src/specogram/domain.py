"""Optional registry of classes used to validate specifications semantically.

A domain model lists the classes a specification may talk about together
with their features, split by command-query separation: commands change
state and yield nothing, queries yield a declared result type and change
nothing.  Checking a specification against a model catches misspelled
types and features, actions that name queries, effect targets that name
commands, and increments/decrements aimed at non-integer queries.

The file format::

    class CLOCK
      command tick
      query hour : INTEGER
      query minute : INTEGER
    end

``--`` comments run to the end of the line.  INTEGER is the one built-in
numeric type name recognized for increment/decrement targets.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import (
    ACTION_NOT_COMMAND,
    DUPLICATE_CLASS,
    DUPLICATE_FEATURE,
    EFFECT_NOT_QUERY,
    NON_INTEGER_TARGET,
    SYNTAX_ERROR,
    UNKNOWN_FEATURE,
    UNKNOWN_TYPE,
    UNRESOLVED_PATH,
    Diagnostic,
    Severity,
    SourceSpan,
    SpecogramError,
)
from .fragments import BoolExpr, QueryPath, QueryRef
from .identifiers import validate_identifier
from .model import Decrements, Increments, Requirement, Specification

INTEGER_TYPE = "INTEGER"

COMMAND = "command"
QUERY = "query"


@dataclass(frozen=True)
class FeatureDecl:
    name: str
    kind: str  # COMMAND or QUERY
    result_type: str | None = None

    def __post_init__(self) -> None:
        validate_identifier(self.name)
        if self.kind not in (COMMAND, QUERY):
            raise ValueError(f"feature kind must be 'command' or 'query', not {self.kind!r}")
        if self.kind == COMMAND and self.result_type is not None:
            raise ValueError(f"command {self.name!r} must not declare a result type")
        if self.kind == QUERY:
            if self.result_type is None:
                raise ValueError(f"query {self.name!r} must declare a result type")
            validate_identifier(self.result_type)


@dataclass(frozen=True)
class ClassDecl:
    name: str
    features: tuple[FeatureDecl, ...] = ()

    def __post_init__(self) -> None:
        validate_identifier(self.name)
        object.__setattr__(self, "features", tuple(self.features))
        seen: set[str] = set()
        for feature in self.features:
            if feature.name in seen:
                raise ValueError(f"duplicate feature {feature.name!r} in class {self.name!r}")
            seen.add(feature.name)

    def find_feature(self, name: str) -> FeatureDecl | None:
        for feature in self.features:
            if feature.name == name:
                return feature
        return None


@dataclass(frozen=True)
class DomainModel:
    classes: tuple[ClassDecl, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "classes", tuple(self.classes))
        seen: set[str] = set()
        for decl in self.classes:
            if decl.name in seen:
                raise ValueError(f"duplicate class {decl.name!r}")
            seen.add(decl.name)

    def find_class(self, name: str) -> ClassDecl | None:
        for decl in self.classes:
            if decl.name == name:
                return decl
        return None


# ---------------------------------------------------------------------------
# Parsing and formatting


def parse_domain_model(text: str, file_name: str = "<model>") -> tuple[DomainModel, list[Diagnostic]]:
    """Parse a domain-model file; recovery is per line.

    Returns the model built from every well-formed declaration plus a
    diagnostic per problem, so a partially broken registry stays usable.
    """
    diagnostics: list[Diagnostic] = []
    classes: list[ClassDecl] = []
    class_names: set[str] = set()
    current_name: str | None = None
    current_line = 0
    features: list[FeatureDecl] = []
    feature_names: set[str] = set()

    def error(message: str, line_no: int, col: int = 1, code: str = SYNTAX_ERROR) -> None:
        diagnostics.append(
            Diagnostic(Severity.ERROR, code, message, SourceSpan(file_name, line_no, col))
        )

    def close_class() -> None:
        nonlocal current_name
        assert current_name is not None
        if current_name in class_names:
            error(f"duplicate class {current_name!r}", current_line, 7, DUPLICATE_CLASS)
        else:
            class_names.add(current_name)
            classes.append(ClassDecl(current_name, tuple(features)))
        current_name = None

    for line_index, raw_line in enumerate(text.split("\n")):
        line_no = line_index + 1
        line = raw_line.split("--", 1)[0]
        words = line.split()
        if not words:
            continue
        head = words[0]
        col = line.index(head) + 1
        if head == "class":
            if current_name is not None:
                error(f"class {current_name!r} is missing its 'end'", line_no)
                close_class()
            if len(words) != 2 or not _valid_name(words[1]):
                error("expected 'class <TYPE>'", line_no, col)
                continue
            current_name = words[1]
            current_line = line_no
            features = []
            feature_names = set()
        elif head == "end":
            if current_name is None:
                error("'end' without an open class", line_no, col)
            elif len(words) != 1:
                error("'end' takes nothing else on its line", line_no, col)
            else:
                close_class()
        elif head == COMMAND:
            if current_name is None:
                error("'command' outside a class block", line_no, col)
            elif len(words) != 2 or not _valid_name(words[1]):
                error("expected 'command <name>'", line_no, col)
            elif words[1] in feature_names:
                error(f"duplicate feature {words[1]!r}", line_no, col, DUPLICATE_FEATURE)
            else:
                feature_names.add(words[1])
                features.append(FeatureDecl(words[1], COMMAND))
        elif head == QUERY:
            if current_name is None:
                error("'query' outside a class block", line_no, col)
            elif (
                len(words) != 4
                or words[2] != ":"
                or not _valid_name(words[1])
                or not _valid_name(words[3])
            ):
                error("expected 'query <name> : <TYPE>'", line_no, col)
            elif words[1] in feature_names:
                error(f"duplicate feature {words[1]!r}", line_no, col, DUPLICATE_FEATURE)
            else:
                feature_names.add(words[1])
                features.append(FeatureDecl(words[1], QUERY, words[3]))
        else:
            error(f"expected 'class', 'command', 'query', or 'end', found {head!r}", line_no, col)

    if current_name is not None:
        error(f"class {current_name!r} is missing its 'end'", len(text.split("\n")))
        close_class()

    return DomainModel(tuple(classes)), diagnostics


def _valid_name(word: str) -> bool:
    try:
        validate_identifier(word)
    except SpecogramError:
        return False
    return True


def format_domain_model(model: DomainModel) -> str:
    blocks = []
    for decl in model.classes:
        lines = [f"class {decl.name}"]
        for feature in decl.features:
            if feature.kind == COMMAND:
                lines.append(f"  command {feature.name}")
            else:
                lines.append(f"  query {feature.name} : {feature.result_type}")
        lines.append("end")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n" if blocks else ""


# ---------------------------------------------------------------------------
# Checking a specification against a model


def _guard_query_paths(guard: BoolExpr) -> list[QueryPath]:
    """Query paths referenced by a guard, first occurrence order, deduplicated."""
    found: list[QueryPath] = []

    def walk(node) -> None:
        if isinstance(node, QueryRef):
            if node.path not in found:
                found.append(node.path)
            return
        for child in ("left", "right", "operand"):
            if hasattr(node, child):
                walk(getattr(node, child))

    walk(guard)
    return found


class _Checker:
    def __init__(self, model: DomainModel, file_name: str):
        self.model = model
        self.file_name = file_name
        self.diagnostics: list[Diagnostic] = []

    def report(self, severity: Severity, code: str, message: str, span: SourceSpan) -> None:
        self.diagnostics.append(Diagnostic(severity, code, message, span))

    def check_requirement(self, requirement: Requirement, span: SourceSpan) -> None:
        types: dict[str, str] = {}
        usable: set[str] = set()
        for binding in requirement.bindings:
            types[binding.variable] = binding.declared_type
            if self.model.find_class(binding.declared_type) is None:
                self.report(
                    Severity.ERROR,
                    UNKNOWN_TYPE,
                    f"unknown type {binding.declared_type!r} "
                    f"(variable {binding.variable!r} in requirement {requirement.label!r})",
                    span,
                )
            else:
                usable.add(binding.variable)

        label = requirement.label
        if requirement.action.root in usable:
            self.check_path(
                QueryPath(requirement.action.root, requirement.action.path),
                types,
                span,
                label,
                final_kind=COMMAND,
            )
        target = requirement.effect.target
        if target.root in usable:
            integer_needed = isinstance(requirement.effect, (Increments, Decrements))
            self.check_path(target, types, span, label, final_kind=QUERY, integer_needed=integer_needed)
        if requirement.guard is not None:
            for path in _guard_query_paths(requirement.guard):
                if path.root in usable:
                    self.check_path(path, types, span, label, final_kind=QUERY)

    def check_path(
        self,
        path: QueryPath,
        types: dict[str, str],
        span: SourceSpan,
        label: str,
        *,
        final_kind: str,
        integer_needed: bool = False,
    ) -> None:
        decl = self.model.find_class(types[path.root])
        assert decl is not None
        for index, segment in enumerate(path.path):
            feature = decl.find_feature(segment)
            if feature is None:
                self.report(
                    Severity.ERROR,
                    UNKNOWN_FEATURE,
                    f"class {decl.name!r} has no feature {segment!r} "
                    f"(in {path.dotted!r}, requirement {label!r})",
                    span,
                )
                return
            if index == len(path.path) - 1:
                self.check_final(feature, path, decl, label, span, final_kind, integer_needed)
                return
            # Navigating deeper requires the segment to yield a value of a
            # class the model knows; otherwise the rest stays unchecked.
            if feature.kind != QUERY:
                self.report(
                    Severity.WARNING,
                    UNRESOLVED_PATH,
                    f"cannot navigate through command {segment!r} "
                    f"(in {path.dotted!r}, requirement {label!r})",
                    span,
                )
                return
            next_decl = self.model.find_class(feature.result_type)
            if next_decl is None:
                self.report(
                    Severity.WARNING,
                    UNRESOLVED_PATH,
                    f"type {feature.result_type!r} of {segment!r} is not in the model; "
                    f"the rest of {path.dotted!r} is unchecked (requirement {label!r})",
                    span,
                )
                return
            decl = next_decl

    def check_final(
        self,
        feature: FeatureDecl,
        path: QueryPath,
        decl: ClassDecl,
        label: str,
        span: SourceSpan,
        final_kind: str,
        integer_needed: bool,
    ) -> None:
        if final_kind == COMMAND and feature.kind != COMMAND:
            self.report(
                Severity.ERROR,
                ACTION_NOT_COMMAND,
                f"execution of {path.dotted!r} demands a command, but "
                f"{decl.name}.{feature.name} is a query (requirement {label!r})",
                span,
            )
            return
        if final_kind == QUERY and feature.kind != QUERY:
            self.report(
                Severity.ERROR,
                EFFECT_NOT_QUERY,
                f"{path.dotted!r} must yield a value, but "
                f"{decl.name}.{feature.name} is a command (requirement {label!r})",
                span,
            )
            return
        if integer_needed and feature.kind == QUERY and feature.result_type != INTEGER_TYPE:
            self.report(
                Severity.ERROR,
                NON_INTEGER_TARGET,
                f"increment/decrement target {path.dotted!r} has type "
                f"{feature.result_type!r}, not {INTEGER_TYPE} (requirement {label!r})",
                span,
            )


def check_against_model(
    spec: Specification,
    model: DomainModel,
    *,
    spans: dict[str, SourceSpan] | None = None,
    file_name: str = "<specification>",
) -> list[Diagnostic]:
    """Diagnostics for every inconsistency between ``spec`` and ``model``.

    An empty list means the specification is fully consistent with the
    model.  ``spans`` may map requirement labels to their source
    locations (as collected by the file frontend); without it,
    diagnostics point at the requirement's ordinal position.
    """
    checker = _Checker(model, file_name)
    for index, requirement in enumerate(spec.requirements):
        span = None if spans is None else spans.get(requirement.label)
        if span is None:
            span = SourceSpan(file_name, index + 1, 1)
        checker.check_requirement(requirement, span)
    return checker.diagnostics
