import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from logres.cli import main

MODELS = Path(__file__).resolve().parent.parent / "models"
EXAMPLE = str(MODELS / "example.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, data, name="m.json"):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(path)


def _bool(text):
    return {"True": True, "False": False, "None": None}[text]


def parse_analysis_text(text: str) -> dict:
    """Rebuild the JSON analysis fields from the text rendering."""
    lines = text.splitlines()
    out = {"matrix": [], "pairs": [], "witnesses": [], "candidates": [], "g2": [], "notes": []}
    section = None
    for line in lines:
        if m := re.match(r"model: dim = (\d+), log_branches = (\d+)", line):
            out["dim"], out["log_branches"] = int(m[1]), int(m[2])
        elif line.startswith("  row: "):
            out["matrix"].append(line[7:].split())
        elif m := re.match(r"pfaffian: (\S+)", line):
            out["pfaffian"] = m[1]
        elif m := re.match(r"  pair \{(\d+),(\d+)\}: c = (\S+), residual = (\w+), "
                           r"meets_triple_locus = (\w+), special = (\w+)", line):
            out["pairs"].append({"pair": [int(m[1]), int(m[2])], "c": m[3], "residual": _bool(m[4]),
                                 "meets_triple_locus": _bool(m[5]), "special": _bool(m[6]), "triples": []})
        elif m := re.match(r"    triple \{(\d+),(\d+)\} \+ (\d+): ratio = (\S+), special = (\w+), "
                           r"special_alt_convention = (\w+)", line):
            out["pairs"][-1]["triples"].append({
                "pair": [int(m[1]), int(m[2])], "third": int(m[3]),
                "ratio": None if m[4] == "None" else m[4],
                "special": _bool(m[5]), "special_alt_convention": _bool(m[6]),
            })
        elif m := re.match(r"verdict: (.*)", line):
            out["summary"] = m[1]
        elif m := re.match(r"  criterion_holds = (\w+)", line):
            out["criterion_holds"] = _bool(m[1])
        elif m := re.match(r"  witness \{(\d+),(\d+)\}: (\S+)", line):
            out["witnesses"].append({"pair": [int(m[1]), int(m[2])], "reason": m[3]})
        elif m := re.match(r"deformations: max_degree = (\d+)", line):
            out["max_degree"] = int(m[1])
        elif m := re.match(r"  candidate \((\d+),(\d+)\) a = \(([\d,]+)\): closed = (\w+), exact = (\w+), "
                           r"certificate = (.*)", line):
            cert = None if m[6] == "none" else dict(zip(("lambda", "mu"), m[6].strip("()").split(", ")))
            out["candidates"].append({"pair": [int(m[1]), int(m[2])], "a": [int(x) for x in m[3].split(",")],
                                      "closed": _bool(m[4]), "exact": _bool(m[5]), "certificate": cert,
                                      "column_relation": None})
        elif m := re.match(r"    column relation: (.*) \[holds = (\w+), integral = (\w+)\]", line):
            out["candidates"][-1]["column_relation"] = {"text": m[1], "holds": _bool(m[2]),
                                                        "integral": _bool(m[3])}
        elif m := re.match(r"  pair \{(\d+),(\d+)\}: kernel = (.*); psi2 = (.*); matching = (.*)", line):
            kernel = [] if m[3] == "none" else [[int(x) for x in b.split(",")] for b in m[3].split("; ")]
            out["g2"].append({"pair": [int(m[1]), int(m[2])], "kernel": kernel,
                              "psi2": None if m[4] == "-" else m[4].split(),
                              "matching_conventions": [] if m[5] == "none" else m[5].split()})
        elif line == "notes:":
            section = "notes"
        elif section == "notes" and line.startswith("  - "):
            out["notes"].append(line[4:])
    return out


def json_view(report: dict) -> dict:
    view = {
        "dim": report["model"]["dim"],
        "log_branches": report["model"]["log_branches"],
        "matrix": report["model"]["matrix"],
        "pfaffian": report["pfaffian"],
        "pairs": report["pairs"],
        "summary": report["verdict"]["summary"],
        "criterion_holds": report["verdict"]["criterion_holds"],
        "witnesses": report["verdict"]["witnesses"],
        "candidates": [],
        "g2": [],
        "notes": report["notes"],
    }
    if report["deformations"] is not None:
        view["max_degree"] = report["deformations"]["max_degree"]
        view["candidates"] = report["deformations"]["candidates"]
        view["g2"] = report["g2_diagnostics"]
    return view


class TestAnalyze:
    def test_example_text(self, capsys):
        code, out, err = run(capsys, "analyze", EXAMPLE, "--deform-max-degree", "2")
        assert code == 0
        assert "pfaffian: 8/1" in out
        assert "witness {1,2}: special" in out
        assert "k_1 - k_2 + (e_1 + e_2) - (e_3 + e_4) = 0" in out
        assert "(4,3)" in err

    def test_example_json(self, capsys):
        code, out, _ = run(capsys, "analyze", EXAMPLE, "--format", "json", "--deform-max-degree", "2")
        report = json.loads(out)
        assert code == 0
        assert report["pfaffian"] == "8/1"
        assert report["verdict"]["witnesses"] == [{"pair": [1, 2], "reason": "special"}]
        (cand,) = report["deformations"]["candidates"]
        assert cand["a"] == [0, 0, 1, 1] and cand["exact"] is False
        assert cand["certificate"] == {"lambda": "-1/1", "mu": "1/1"}

    @pytest.mark.parametrize("model", ["example.json", "rational.json", "standard_symplectic.json"])
    def test_json_and_text_agree(self, capsys, model):
        path = str(MODELS / model)
        _, text, _ = run(capsys, "analyze", path, "--deform-max-degree", "3")
        _, js, _ = run(capsys, "analyze", path, "--deform-max-degree", "3", "--format", "json")
        assert parse_analysis_text(text) == json_view(json.loads(js))

    def test_json_and_text_agree_without_search(self, capsys):
        _, text, _ = run(capsys, "analyze", EXAMPLE)
        _, js, _ = run(capsys, "analyze", EXAMPLE, "--format", "json")
        assert parse_analysis_text(text) == json_view(json.loads(js))

    def test_deterministic(self, capsys):
        first = run(capsys, "analyze", EXAMPLE, "--format", "json", "--deform-max-degree", "2")
        second = run(capsys, "analyze", EXAMPLE, "--format", "json", "--deform-max-degree", "2")
        assert first == second

    def test_standard_symplectic_holds(self, capsys):
        code, out, _ = run(capsys, "analyze", str(MODELS / "standard_symplectic.json"), "--format", "json")
        v = json.loads(out)["verdict"]
        assert code == 0 and v["criterion_holds"] and v["witnesses"] == []


class TestSubcommands:
    def test_pfaffian(self, capsys):
        code, out, _ = run(capsys, "pfaffian", EXAMPLE, "--format", "json")
        assert code == 0 and json.loads(out)["pfaffian"] == "8/1"

    def test_residues(self, capsys):
        code, out, _ = run(capsys, "residues", EXAMPLE, "--format", "json")
        report = json.loads(out)
        assert report["biresidues"][0] == {"pair": [1, 2], "c": "1/1"}
        assert code == 0

    def test_deform_search(self, capsys):
        code, out, _ = run(capsys, "deform-search", EXAMPLE, "--max-degree", "2")
        assert code == 0
        assert "count = 1" in out and "candidate (1,2) a = (0,0,1,1)" in out

    def test_upper_triangle_input(self, tmp_path, capsys):
        path = write(tmp_path, {"dim": 4, "log_branches": 4, "upper": [1, 2, 4, 3, 5, "6/1"]})
        code, out, err = run(capsys, "pfaffian", path)
        assert code == 0 and "8/1" in out and err == ""


class TestExitCodes:
    def test_odd_dimension(self, tmp_path, capsys):
        path = write(tmp_path, {"dim": 3, "log_branches": 3, "upper": [1, 2, 3]})
        code, _, err = run(capsys, "analyze", path)
        assert code == 1 and "dim" in err

    def test_degenerate(self, tmp_path, capsys):
        # b_12 = b_13 = b_14 = 0: row 1 vanishes, so Pf = 0
        path = write(tmp_path, {"dim": 4, "log_branches": 4, "upper": [0, 0, 0, 3, 5, 6]})
        code, _, err = run(capsys, "analyze", path)
        assert code == 2 and "degenerate" in err

    def test_float_rejected(self, tmp_path, capsys):
        path = write(tmp_path, {"dim": 2, "log_branches": 2, "upper": [0.5]})
        code, _, err = run(capsys, "pfaffian", path)
        assert code == 1 and "upper[0]" in err

    def test_bad_json_position(self, tmp_path, capsys):
        path = write(tmp_path, '{"dim": 2,\n  "upper": [1,]}')
        code, _, err = run(capsys, "pfaffian", path)
        assert code == 1 and ":2:" in err

    def test_missing_file(self, capsys):
        assert run(capsys, "pfaffian", "/nonexistent/model.json")[0] == 1

    def test_unknown_command(self, capsys):
        assert run(capsys, "frobnicate")[0] == 1

    def test_j_zero(self, capsys):
        code, _, err = run(capsys, "verify-complexes", "--dim", "2", "--truncation", "1", "--j", "0")
        assert code == 1 and "--j" in err

    def test_verification_failure(self, capsys, monkeypatch):
        from logres import complexes as cx

        def broken(spec, j, m=1):
            rep = cx.ComplexCheckReport("principal-parts", spec.N, spec.t, {"j": j})
            rep.dims[(0,) * spec.N] = (1,) + (0,) * spec.N
            return rep

        monkeypatch.setattr(cx, "principal_parts_exactness", broken)
        code, out, _ = run(capsys, "verify-complexes", "--dim", "2", "--truncation", "1")
        assert code == 3 and "overall: FAIL" in out


class TestVerifyComplexes:
    def test_small(self, capsys):
        code, out, _ = run(capsys, "verify-complexes", "--dim", "2", "--truncation", "1", "--format", "json")
        report = json.loads(out)
        assert code == 0 and report["passed"]
        assert report["normal_log"]["multidegrees"][0] == {"multidegree": [-1, 0], "homology": [0, 0, 0]}
        assert report["printed_convention"]["d_squares_to_zero"] is False

    def test_default_size(self, capsys):
        code, out, _ = run(capsys, "verify-complexes", "--dim", "4", "--truncation", "2")
        assert code == 0 and "overall: PASS" in out

    def test_limits(self, capsys):
        assert run(capsys, "verify-complexes", "--dim", "8")[0] == 1
        assert run(capsys, "verify-complexes", "--truncation", "4")[0] == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "logres", "pfaffian", EXAMPLE],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "pfaffian: 8/1" in proc.stdout
