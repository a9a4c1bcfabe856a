"""specogram: requirements as runnable structured natural language.

Author requirements either through the staged fluent vocabulary
(:func:`specification`) or as ``.spec`` files, then generate the
consistent-by-construction views: a natural-language document, seamless
parameterized unit tests, inferred contracts, and a traceability table.
"""

from .diagnostics import Diagnostic, Severity, SourceSpan, SpecogramError
from .domain import (
    ClassDecl,
    DomainModel,
    FeatureDecl,
    check_against_model,
    format_domain_model,
    parse_domain_model,
)
from .fragments import (
    Add,
    And,
    BoolExpr,
    BoolLit,
    Comparison,
    IntLiteral,
    Not,
    Or,
    QualifiedCall,
    QueryPath,
    QueryRef,
    Sub,
    free_roots,
    parse_bool_expr,
    parse_call,
    parse_query,
    render,
)
from .frontend import ParseResult, format_specogram, parse_specogram
from .identifiers import is_identifier, validate_identifier
from .model import (
    Decrements,
    DoesNotChange,
    EffectKind,
    Increments,
    Requirement,
    Specification,
    VariableBinding,
    add_requirement,
    from_canonical_text,
    is_trivially_true,
    to_canonical_text,
)
from .views import (
    EmitOptions,
    GeneratedArtifact,
    emit_contracts,
    emit_latex,
    emit_puts,
    emit_trace,
    generate,
    write_artifact,
)
from .vocabulary import SpecificationBuilder, UnfinishedRequirementWarning, specification

__version__ = "0.1.0"

__all__ = [
    "Add",
    "And",
    "BoolExpr",
    "BoolLit",
    "ClassDecl",
    "Comparison",
    "Decrements",
    "Diagnostic",
    "DoesNotChange",
    "DomainModel",
    "EffectKind",
    "EmitOptions",
    "FeatureDecl",
    "GeneratedArtifact",
    "Increments",
    "IntLiteral",
    "Not",
    "Or",
    "ParseResult",
    "QualifiedCall",
    "QueryPath",
    "QueryRef",
    "Requirement",
    "Severity",
    "SourceSpan",
    "Specification",
    "SpecificationBuilder",
    "SpecogramError",
    "Sub",
    "UnfinishedRequirementWarning",
    "VariableBinding",
    "add_requirement",
    "check_against_model",
    "emit_contracts",
    "emit_latex",
    "emit_puts",
    "emit_trace",
    "format_domain_model",
    "format_specogram",
    "free_roots",
    "from_canonical_text",
    "generate",
    "is_identifier",
    "is_trivially_true",
    "parse_bool_expr",
    "parse_call",
    "parse_domain_model",
    "parse_query",
    "parse_specogram",
    "render",
    "specification",
    "to_canonical_text",
    "validate_identifier",
    "write_artifact",
]
