import json
import subprocess
import sys

import pytest

from czono import report
from czono.analyzer import analyze_source
from czono.cli import main
from czono.corpus import load


@pytest.fixture
def prog(tmp_path):
    def write(text, name="p.prog"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def test_analyze_text(prog, capsys):
    assert main(["analyze", prog(load()["running"])]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[-1].startswith("  y in [")
    assert "end:" in out and "9.71605]" in out


def test_analyze_trace_shows_forms_and_noise(prog, capsys):
    assert main(["analyze", "--trace", prog("real x = [0,2]; real y; if (x <= 1) y = x;")]) == 0
    out = capsys.readouterr().out
    assert "    x = 1 + 1*e1" in out
    assert "noise: 1 central, 0 perturbation; e1 in [-1, " in out


def test_analyze_json_round_trip(prog, capsys):
    assert main(["analyze", "--json", prog(load()["cosine"])]) == 0
    text = capsys.readouterr().out
    doc = report.loads(text)
    assert report.loads(report.dumps(doc)) == doc
    end = [p for p in doc["points"] if p["id"] == "end"][0]
    assert end["reachable"] and set(end["vars"]) >= {"x", "y"}


def test_json_with_check_keeps_stdout_clean(prog, capsys):
    assert main(["analyze", "--json", "--check", "50", prog("real x = [0,1]; real y; y = x*x;")]) == 0
    cap = capsys.readouterr()
    json.loads(cap.out)
    assert "50 samples (seed 0), 0 violations" in cap.err


def test_unreachable_point_in_json(prog, capsys):
    assert main(["analyze", "--json", prog("real x = [0,1]; real y; if (x > 5) y = 1;")]) == 0
    doc = json.loads(capsys.readouterr().out)
    dead = [p for p in doc["points"] if not p["reachable"]]
    assert dead and dead[0]["vars"] == {}


def test_schema_rejects_malformed_documents():
    good = report.to_json(analyze_source("real x = [0,1];"))
    report.validate(good)
    bad = json.loads(json.dumps(good))
    bad["points"][0]["vars"]["x"]["lo"] = "zero"
    with pytest.raises(report.SchemaError):
        report.validate(bad)
    with pytest.raises(report.SchemaError):
        report.validate({"points": [{"id": "end"}]})
    with pytest.raises(report.SchemaError):
        report.loads('{"points": [], "extra": 1}')


def test_parse_error_exit_code(prog, capsys):
    path = prog("real x = [0,1];\nx = y + 1;")
    assert main(["analyze", path]) == 1
    err = capsys.readouterr().err
    assert err.startswith(f"{path}:2:5:") and "undeclared" in err


def test_missing_file_exit_code(capsys):
    assert main(["analyze", "/nonexistent/x.prog"]) == 1


def test_symbol_cap_is_a_diagnostic(prog, capsys):
    src = "real x = [0,1]; real y; y = x*x; y = y*y; y = y*y; y = y*y;"
    assert main(["analyze", "--max-symbols", "3", prog(src)]) == 1
    assert "analysis failed" in capsys.readouterr().err


def test_bad_flag_values():
    with pytest.raises(SystemExit) as e:
        main(["analyze", "x.prog", "--unroll", "0"])
    assert e.value.code == 2


def test_rational_precision(prog, capsys):
    assert main(["analyze", "--precision", "rational", prog("real x = [0,1]; real y; y = x / 3;")]) == 0
    assert "y in [0, 0.333333]" in capsys.readouterr().out


def test_bench_on_a_directory(tmp_path, capsys):
    (tmp_path / "a.prog").write_text("// @interest y\nreal x = [0,1]; real y; y = 2*x;")
    assert main(["bench", "--dir", str(tmp_path), "--samples", "200"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split()[:3] == ["program", "var", "constrained"]
    assert lines[2].split()[:2] == ["a", "y"] and "WIDER" not in lines[2]


def test_bench_without_interest_is_a_diagnostic(tmp_path, capsys):
    (tmp_path / "a.prog").write_text("real x = [0,1];")
    assert main(["bench", "--dir", str(tmp_path), "--samples", "10"]) == 1


def test_module_entry_point(prog):
    out = subprocess.run([sys.executable, "-m", "czono", "analyze", prog("real x = [1,3];")],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "x in [1, 3]" in out.stdout
