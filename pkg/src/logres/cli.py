"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 degenerate structure, 3 verification
failure.  Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import report as rp
from .deform import DEFAULT_MAX_DEGREE
from .errors import DegenerateStructureError

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DEGENERATE = 2
EXIT_VERIFY = 3

MAX_DIM = 6
MAX_TRUNCATION = 3


class InputError(Exception):
    pass


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logres",
        description="Residue criterion and monomial deformations for log-symplectic normal forms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_cmd(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("model", help="JSON model file")
        p.add_argument("--format", choices=("json", "text"), default="text")
        return p

    p = add_model_cmd("analyze", "full report: Pfaffian, residues, verdict, optional deformation search")
    p.add_argument("--deform-max-degree", type=_nonneg_int, default=None, metavar="K")
    add_model_cmd("pfaffian", "Pfaffian of the coefficient matrix")
    add_model_cmd("residues", "biresidues and pair/triple classification")
    p = add_model_cmd("deform-search", "closed monomial deformation candidates")
    p.add_argument("--max-degree", type=_nonneg_int, default=DEFAULT_MAX_DEGREE, metavar="K")

    p = sub.add_parser("verify-complexes", help="desk-scale exactness checks of the cone and normal log complexes")
    p.add_argument("--dim", type=int, default=4, metavar="N")
    p.add_argument("--truncation", type=int, default=2, metavar="T")
    p.add_argument("--j", type=int, action="append", default=None, metavar="J",
                   help="principal-parts twist (repeatable; default 1, 2, 3)")
    p.add_argument("--branches", type=int, default=1, metavar="M",
                   help="number of branch coordinates for the normal log and principal parts checks")
    p.add_argument("--format", choices=("json", "text"), default="text")
    return parser


def _emit(report: dict, fmt: str, render) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        sys.stdout.write(render(report))


def _run_model_command(args) -> int:
    loaded = rp.load_model(args.model)
    for note in loaded.notes:
        print(f"warning: {note}", file=sys.stderr)
    model = loaded.model
    if args.command == "analyze":
        report = rp.analysis_report(model, args.deform_max_degree, loaded.notes)
        _emit(report, args.format, rp.render_analysis_text)
    elif args.command == "pfaffian":
        _emit(rp.pfaffian_report(model), args.format, rp.render_simple_text)
    elif args.command == "residues":
        _emit(rp.residues_report(model), args.format, rp.render_simple_text)
    elif args.command == "deform-search":
        _emit(rp.deform_report(model, args.max_degree), args.format, rp.render_simple_text)
    return EXIT_OK


def _run_verify(args) -> int:
    js = args.j if args.j is not None else [1, 2, 3]
    if not 2 <= args.dim <= MAX_DIM:
        raise InputError(f"--dim must lie in 2..{MAX_DIM}")
    if not 0 <= args.truncation <= MAX_TRUNCATION:
        raise InputError(f"--truncation must lie in 0..{MAX_TRUNCATION}")
    if not 1 <= args.branches <= args.dim:
        raise InputError(f"--branches must lie in 1..{args.dim}")
    bad = [j for j in js if j <= 0]
    if bad:
        raise InputError(f"--j must be positive (principal parts complexes are exact only for j > 0), got {bad}")
    report = rp.complexes_report(args.dim, args.truncation, js, args.branches)
    _emit(report, args.format, rp.render_complexes_text)
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.command == "verify-complexes":
            return _run_verify(args)
        return _run_model_command(args)
    except DegenerateStructureError as exc:
        print(f"error: degenerate log-symplectic structure: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (rp.ModelFileError, InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
