"""Model files and JSON/text reports.

Rationals are always serialized as ``"p/q"`` strings in lowest terms with a
positive denominator, in both output formats.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import complexes as cx
from . import deform, residues
from .errors import LogresError
from .model import Model
from .skewlinalg import complete_skew, lower_triangle_conflicts, to_fraction

SCHEMA_VERSION = 1

HOLDS_TEXT = "criterion holds: strong unobstructedness guaranteed"
FAILS_TEXT = "criterion fails: Theorem inapplicable; witnesses listed"

CONVENTION_NOTES = (
    "special-triple ratio is (c_jl + c_li) / c_ij; using c_ji as denominator negates every ratio "
    "(reported per triple as special_alt_convention)",
    "pairs without triple points are reported as 'no-triple-points', separately from 'non-residual'",
    "a failing criterion does not assert obstructedness",
)


class ModelFileError(LogresError, ValueError):
    """Malformed model file; the message carries the offending position."""


def fmt_q(q: Fraction | int | None) -> str | None:
    if q is None:
        return None
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass
class LoadedModel:
    model: Model
    notes: list[str] = field(default_factory=list)


def _entry(value, where: str) -> Fraction:
    if isinstance(value, float):
        raise ModelFileError(f"{where}: floating-point value {value!r}; use an integer or a 'p/q' string")
    try:
        return to_fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ModelFileError(f"{where}: cannot parse {value!r} as a rational ({exc})") from None


def model_from_data(data, source: str = "<model>") -> LoadedModel:
    """Validate decoded JSON and build the model.

    Raises :class:`ModelFileError` for malformed input and
    :class:`~logres.errors.DegenerateStructureError` when the Pfaffian vanishes.
    """
    if not isinstance(data, dict):
        raise ModelFileError(f"{source}: top level must be an object")
    dim = data.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 2 or dim % 2:
        raise ModelFileError(f"{source}: 'dim' must be a positive even integer, got {dim!r}")
    m = data.get("log_branches", dim)
    if not isinstance(m, int) or isinstance(m, bool) or not 0 <= m <= dim:
        raise ModelFileError(f"{source}: 'log_branches' must be an integer in 0..{dim}, got {m!r}")
    notes: list[str] = []
    if "matrix" in data:
        rows = data["matrix"]
        if not isinstance(rows, list) or len(rows) != dim:
            raise ModelFileError(f"{source}: 'matrix' must be a list of {dim} rows")
        parsed = []
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != dim:
                raise ModelFileError(f"{source}: matrix[{i}] must be a list of {dim} entries")
            parsed.append([
                None if (j < i and v is None) else _entry(v, f"{source}: matrix[{i}][{j}]")
                for j, v in enumerate(row)
            ])
        for i, j in lower_triangle_conflicts(parsed):
            notes.append(
                f"lower-triangle entry ({i},{j}) = {fmt_q(parsed[i - 1][j - 1])} disagrees with the upper "
                f"triangle; skew completion uses -b_{j}{i} = {fmt_q(-parsed[j - 1][i - 1])}"
            )
        B = complete_skew([[0 if v is None else v for v in row] for row in parsed])
    elif "upper" in data:
        upper = data["upper"]
        if not isinstance(upper, list) or len(upper) != dim * (dim - 1) // 2:
            raise ModelFileError(f"{source}: 'upper' must list {dim * (dim - 1) // 2} entries")
        vals = [_entry(v, f"{source}: upper[{k}]") for k, v in enumerate(upper)]
        rows = [[Fraction(0)] * dim for _ in range(dim)]
        it = iter(vals)
        for i in range(dim):
            for j in range(i + 1, dim):
                rows[i][j] = next(it)
        B = complete_skew(rows)
    else:
        raise ModelFileError(f"{source}: expected a 'matrix' or 'upper' field")
    return LoadedModel(Model(B, m), notes)


def load_model(path: str | Path) -> LoadedModel:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ModelFileError(f"{path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return model_from_data(data, str(path))


def parse_model(path: str | Path) -> Model:
    return load_model(path).model


def model_dict(model: Model) -> dict:
    return {
        "dim": model.N,
        "log_branches": model.m,
        "matrix": [[fmt_q(x) for x in row] for row in model.B.entries],
    }


def pair_dict(rep: residues.PairReport) -> dict:
    return {
        "pair": list(rep.pair),
        "c": fmt_q(rep.c),
        "residual": rep.residual,
        "meets_triple_locus": rep.meets_triple_locus,
        "special": rep.special,
        "triples": [
            {
                "pair": list(t.pair),
                "third": t.third,
                "ratio": fmt_q(t.ratio),
                "special": t.special,
                "special_alt_convention": t.special_alt_convention,
            }
            for t in rep.triples
        ],
    }


def verdict_dict(v: residues.Verdict) -> dict:
    return {
        "criterion_holds": v.criterion_holds,
        "summary": HOLDS_TEXT if v.criterion_holds else FAILS_TEXT,
        "witnesses": [{"pair": list(p), "reason": r} for p, r in v.witnesses],
    }


def candidate_dict(model: Model, cand: deform.DeformationCandidate) -> dict:
    out = {
        "pair": [cand.i, cand.j],
        "a": list(cand.a),
        "closed": cand.closed,
        "exact": cand.exact,
        "certificate": None,
        "column_relation": None,
    }
    if cand.certificate is not None:
        out["certificate"] = {"lambda": fmt_q(cand.certificate.lam), "mu": fmt_q(cand.certificate.mu)}
        rel = deform.column_relation(model, cand)
        out["column_relation"] = {"text": str(rel), "holds": rel.holds, "integral": rel.integral}
    return out


def g2_dict(diag: residues.G2Diagnostic) -> dict:
    return {
        "pair": list(diag.pair),
        "kernel": [list(b) for b in diag.kernel],
        "psi2": None if diag.psi2 is None else [fmt_q(q) for q in diag.psi2],
        "matching_conventions": list(diag.matching_conventions),
    }


def deformation_section(model: Model, max_degree: int) -> dict:
    cands = deform.search(model, max_degree)
    return {
        "max_degree": max_degree,
        "candidates": [candidate_dict(model, c) for c in cands],
    }


def analysis_report(model: Model, deform_max_degree: int | None = None, notes: list[str] = ()) -> dict:
    reports = residues.classify_all(model)
    v = residues.verdict(model, reports)
    report = {
        "schema": "logres-analysis",
        "schema_version": SCHEMA_VERSION,
        "model": model_dict(model),
        "pfaffian": fmt_q(model.pf),
        "pairs": [pair_dict(r) for r in reports],
        "verdict": verdict_dict(v),
        "deformations": None,
        "g2_diagnostics": None,
        "notes": list(notes) + list(CONVENTION_NOTES),
    }
    if deform_max_degree is not None:
        report["deformations"] = deformation_section(model, deform_max_degree)
        report["g2_diagnostics"] = [
            g2_dict(residues.g2_kernel_diagnostic(model, *r.pair, deform_max_degree))
            for r in reports
            if r.residual
        ]
    return report


def render_analysis_text(report: dict) -> str:
    mdl = report["model"]
    lines = [
        f"logres analysis (schema {report['schema_version']})",
        f"model: dim = {mdl['dim']}, log_branches = {mdl['log_branches']}",
    ]
    for row in mdl["matrix"]:
        lines.append("  row: " + " ".join(row))
    lines.append(f"pfaffian: {report['pfaffian']}")
    lines.append("pairs:")
    for p in report["pairs"]:
        i, j = p["pair"]
        lines.append(
            f"  pair {{{i},{j}}}: c = {p['c']}, residual = {p['residual']}, "
            f"meets_triple_locus = {p['meets_triple_locus']}, special = {p['special']}"
        )
        for t in p["triples"]:
            lines.append(
                f"    triple {{{i},{j}}} + {t['third']}: ratio = {t['ratio']}, special = {t['special']}, "
                f"special_alt_convention = {t['special_alt_convention']}"
            )
    v = report["verdict"]
    lines.append(f"verdict: {v['summary']}")
    lines.append(f"  criterion_holds = {v['criterion_holds']}")
    for w in v["witnesses"]:
        i, j = w["pair"]
        lines.append(f"  witness {{{i},{j}}}: {w['reason']}")
    if report["deformations"] is not None:
        dsec = report["deformations"]
        lines.append(f"deformations: max_degree = {dsec['max_degree']}, count = {len(dsec['candidates'])}")
        for c in dsec["candidates"]:
            lines.extend(_candidate_lines(c))
    if report["g2_diagnostics"] is not None:
        lines.append("g2 diagnostics:")
        for g in report["g2_diagnostics"]:
            i, j = g["pair"]
            kernel = "; ".join(",".join(map(str, b)) for b in g["kernel"]) or "none"
            psi2 = "-" if g["psi2"] is None else " ".join(g["psi2"])
            conv = " ".join(g["matching_conventions"]) or "none"
            lines.append(f"  pair {{{i},{j}}}: kernel = {kernel}; psi2 = {psi2}; matching = {conv}")
    lines.append("notes:")
    lines.extend(f"  - {n}" for n in report["notes"])
    return "\n".join(lines) + "\n"


def _candidate_lines(c: dict) -> list[str]:
    i, j = c["pair"]
    cert = c["certificate"]
    cert_text = "none" if cert is None else f"({cert['lambda']}, {cert['mu']})"
    lines = [
        f"  candidate ({i},{j}) a = ({','.join(map(str, c['a']))}): closed = {c['closed']}, "
        f"exact = {c['exact']}, certificate = {cert_text}"
    ]
    rel = c["column_relation"]
    if rel is not None:
        lines.append(f"    column relation: {rel['text']} [holds = {rel['holds']}, integral = {rel['integral']}]")
    return lines


def pfaffian_report(model: Model) -> dict:
    return {
        "schema": "logres-pfaffian",
        "schema_version": SCHEMA_VERSION,
        "model": model_dict(model),
        "pfaffian": fmt_q(model.pf),
    }


def residues_report(model: Model) -> dict:
    c = residues.biresidues(model)
    return {
        "schema": "logres-residues",
        "schema_version": SCHEMA_VERSION,
        "model": model_dict(model),
        "biresidues": [
            {"pair": [i, j], "c": fmt_q(c[(i, j)])}
            for i in range(1, model.m + 1)
            for j in range(i + 1, model.m + 1)
        ],
        "pairs": [pair_dict(r) for r in residues.classify_all(model)],
    }


def deform_report(model: Model, max_degree: int) -> dict:
    return {
        "schema": "logres-deformations",
        "schema_version": SCHEMA_VERSION,
        "model": model_dict(model),
        **deformation_section(model, max_degree),
    }


def render_simple_text(report: dict) -> str:
    """Text for the smaller subcommands."""
    lines = [f"{report['schema']} (schema {report['schema_version']})"]
    mdl = report["model"]
    lines.append(f"model: dim = {mdl['dim']}, log_branches = {mdl['log_branches']}")
    if "pfaffian" in report:
        lines.append(f"pfaffian: {report['pfaffian']}")
    for b in report.get("biresidues", []):
        i, j = b["pair"]
        lines.append(f"  c_{i}{j} = {b['c']}")
    for p in report.get("pairs", []):
        i, j = p["pair"]
        lines.append(f"  pair {{{i},{j}}}: residual = {p['residual']}, special = {p['special']}")
        for t in p["triples"]:
            lines.append(f"    triple + {t['third']}: ratio = {t['ratio']}, special = {t['special']}")
    if "candidates" in report:
        lines.append(f"deformations: max_degree = {report['max_degree']}, count = {len(report['candidates'])}")
        for c in report["candidates"]:
            lines.extend(_candidate_lines(c))
    return "\n".join(lines) + "\n"


def _dims_list(dims: dict) -> list[dict]:
    return [{"multidegree": list(e), "homology": list(h)} for e, h in dims.items()]


def complexes_report(N: int, t: int, js: list[int], m: int = 1) -> dict:
    cone = cx.cone_identity_check(N, t)
    printed = cx.printed_convention_check()
    normal = cx.normal_log_homology(cx.TruncationSpec(N, t, -1), m)
    control = cx.normal_log_homology(cx.TruncationSpec(N, t, 0), m)
    pparts = [cx.principal_parts_exactness(cx.TruncationSpec(N, t), j, m) for j in js]
    passed = cone.passed and normal.exact and not control.exact and all(p.exact for p in pparts)
    return {
        "schema": "logres-complexes",
        "schema_version": SCHEMA_VERSION,
        "dim": N,
        "truncation": t,
        "branches": m,
        "passed": passed,
        "cone": {
            "elements": cone.elements,
            "d_squared_failures": cone.d_squared_failures,
            "homotopy_failures": cone.homotopy_failures,
            "h_squared_failures": cone.h_squared_failures,
            "passed": cone.passed,
        },
        "printed_convention": {
            "d_squares_to_zero": printed.d_squares_to_zero,
            "homotopy_identity_holds": printed.homotopy_identity_holds,
            "counterexample": printed.counterexample,
        },
        "normal_log": {"a1": -1, "exact": normal.exact, "multidegrees": _dims_list(normal.dims)},
        "control": {"a1": 0, "exact": control.exact, "nonzero": _dims_list(control.nonzero)},
        "principal_parts": [
            {"j": p.parameters["j"], "exact": p.exact, "multidegrees": _dims_list(p.dims)} for p in pparts
        ],
        "notes": [
            "cone differential D(a, b) = (da + b, -db) with homotopy h(a, b) = (0, a); "
            "the unsigned matrices do not define a differential (see printed_convention)",
        ],
    }


def render_complexes_text(report: dict) -> str:
    lines = [
        f"logres complex verification (schema {report['schema_version']})",
        f"dim = {report['dim']}, truncation = {report['truncation']}, branches = {report['branches']}",
    ]
    cone = report["cone"]
    lines.append(
        f"cone identity: {'PASS' if cone['passed'] else 'FAIL'} over {cone['elements']} basis elements "
        f"(D^2 failures {cone['d_squared_failures']}, hD+Dh failures {cone['homotopy_failures']}, "
        f"h^2 failures {cone['h_squared_failures']})"
    )
    pc = report["printed_convention"]
    lines.append(
        f"unsigned matrices: D^2 = 0 is {pc['d_squares_to_zero']}, hD + Dh = id is "
        f"{pc['homotopy_identity_holds']}; {pc['counterexample']}"
    )
    nl = report["normal_log"]
    lines.append(f"normal log complex (a_1 = -1): {'exact' if nl['exact'] else 'NOT exact'}")
    for row in nl["multidegrees"]:
        lines.append(f"  {tuple(row['multidegree'])}: H = {tuple(row['homology'])}")
    ctl = report["control"]
    lines.append(f"control (a_1 = 0): nonzero homology at {len(ctl['nonzero'])} multidegree(s)")
    for row in ctl["nonzero"]:
        lines.append(f"  {tuple(row['multidegree'])}: H = {tuple(row['homology'])}")
    for pp in report["principal_parts"]:
        lines.append(f"principal parts j = {pp['j']}: {'exact' if pp['exact'] else 'NOT exact'}")
        for row in pp["multidegrees"]:
            if any(row["homology"]):
                lines.append(f"  {tuple(row['multidegree'])}: H = {tuple(row['homology'])}")
    lines.append(f"overall: {'PASS' if report['passed'] else 'FAIL'}")
    return "\n".join(lines) + "\n"
