"""Batch driver: check, generate views from, and format specogram files.

Exit codes: 0 when no error-severity diagnostic was produced, 1 when at
least one was, 2 on usage or I/O failure.  Diagnostics go to standard
error in ``file:line:col: severity[code]: message`` form; standard
output carries only ``wrote <path>`` lines and formatted text.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .diagnostics import Diagnostic, has_errors
from .domain import DomainModel, check_against_model, parse_domain_model
from .frontend import ParseResult, format_specogram, parse_specogram
from .views import DEFAULT_VIEWS, VIEW_KINDS, EmitOptions, generate, write_artifact

OK = 0
FAILED_CHECKS = 1
USAGE = 2


def _read(path: str) -> str | None:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as error:
        print(f"specogram: cannot read {path}: {error.strerror or error}", file=sys.stderr)
        return None


def _print_diagnostics(diagnostics: list[Diagnostic]) -> None:
    for diagnostic in diagnostics:
        print(diagnostic.format(), file=sys.stderr)


def _check_files(spec_file: str, model_file: str | None) -> tuple[ParseResult, DomainModel | None, list[Diagnostic], bool]:
    """Parse the specification and optional model, run the consistency
    check, and return everything a command needs.  The final flag is
    False when a file could not be read at all."""
    text = _read(spec_file)
    if text is None:
        return ParseResult(None), None, [], False
    result = parse_specogram(text, spec_file)
    diagnostics = list(result.diagnostics)

    model = None
    if model_file is not None:
        model_text = _read(model_file)
        if model_text is None:
            return result, None, diagnostics, False
        model, model_diagnostics = parse_domain_model(model_text, model_file)
        diagnostics += model_diagnostics
        if result.specification is not None:
            diagnostics += check_against_model(
                result.specification, model, spans=result.requirement_spans, file_name=spec_file
            )
    return result, model, diagnostics, True


def cmd_check(args: argparse.Namespace) -> int:
    _, _, diagnostics, readable = _check_files(args.file, args.model)
    if not readable:
        return USAGE
    _print_diagnostics(diagnostics)
    return FAILED_CHECKS if has_errors(diagnostics) else OK


def cmd_gen(args: argparse.Namespace) -> int:
    views = tuple(view.strip() for view in args.views.split(","))
    unknown = [view for view in views if view not in VIEW_KINDS]
    if unknown:
        print(
            f"specogram: unknown view(s): {', '.join(unknown)} "
            f"(choose from {', '.join(VIEW_KINDS)})",
            file=sys.stderr,
        )
        return USAGE

    result, _, diagnostics, readable = _check_files(args.file, args.model)
    if not readable:
        return USAGE
    _print_diagnostics(diagnostics)
    if result.specification is None or has_errors(diagnostics):
        return FAILED_CHECKS  # all-or-nothing: nothing is written

    options = EmitOptions(frames=args.frames, views=views, output_dir=args.out)
    artifacts = generate(result.specification, options)
    try:
        paths = [write_artifact(artifact, args.out) for artifact in artifacts]
    except OSError as error:
        print(f"specogram: cannot write into {args.out}: {error.strerror or error}", file=sys.stderr)
        return USAGE
    for path in paths:
        print(f"wrote {path}")
    return OK


def cmd_fmt(args: argparse.Namespace) -> int:
    text = _read(args.file)
    if text is None:
        return USAGE
    result = parse_specogram(text, args.file)
    if result.specification is None or has_errors(result.diagnostics):
        _print_diagnostics(result.diagnostics)
        return FAILED_CHECKS
    formatted = format_specogram(result.specification)

    if args.check:
        if formatted != text:
            print(f"{args.file}: not in canonical form", file=sys.stderr)
            return FAILED_CHECKS
        return OK
    if args.write:
        if formatted != text:
            try:
                Path(args.file).write_text(formatted, encoding="utf-8")
            except OSError as error:
                print(f"specogram: cannot write {args.file}: {error.strerror or error}", file=sys.stderr)
                return USAGE
        return OK
    sys.stdout.write(formatted)
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specogram",
        description="Check, generate views from, and format specogram files.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="parse a specogram and report diagnostics")
    check.add_argument("file", help="the .spec file to check")
    check.add_argument("--model", help="domain-model file to validate against")
    check.set_defaults(run=cmd_check)

    gen = commands.add_parser("gen", help="generate the selected views from a specogram")
    gen.add_argument("file", help="the .spec file to generate from")
    gen.add_argument(
        "--views",
        default=",".join(DEFAULT_VIEWS),
        help=f"comma-separated subset of {','.join(VIEW_KINDS)} (default: %(default)s)",
    )
    gen.add_argument("--frames", action="store_true", help="emit modify clauses in the test view")
    gen.add_argument("--out", default=".", help="output directory (default: current)")
    gen.add_argument("--model", help="domain-model file to validate against first")
    gen.set_defaults(run=cmd_gen)

    fmt = commands.add_parser("fmt", help="reformat a specogram canonically")
    fmt.add_argument("file", help="the .spec file to format")
    mode = fmt.add_mutually_exclusive_group()
    mode.add_argument("--write", action="store_true", help="rewrite the file in place")
    mode.add_argument("--check", action="store_true", help="exit 1 if the file is not canonical")
    fmt.set_defaults(run=cmd_fmt)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return USAGE if exit_.code not in (0, None) else 0
    return args.run(args)


if __name__ == "__main__":
    sys.exit(main())
