from __future__ import annotations

import json
import subprocess
import sys

import pytest

from endocert.cli import EXIT_BLOCKED, EXIT_INPUT, EXIT_NO_RULE, EXIT_OK, main

S5 = {"n": 5, "q": 2, "group": "S5"}
PGL = {"n": 6, "q": 5, "char": 0, "zeta": True, "group": "PGL2_5"}
C6 = {"n": 6, "q": 3, "group": "C6"}


def run(capsys, argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


@pytest.mark.parametrize("doc,code,conclusion", [
    (S5, EXIT_OK, "EndIsZ"), (PGL, EXIT_OK, "EndIsZZetaQ"), (C6, EXIT_NO_RULE, "NoRuleApplies"),
])
def test_analyze_examples(tmp_path, capsys, doc, code, conclusion):
    rc, out, _ = run(capsys, ["analyze", write(tmp_path, "in.json", doc)])
    assert rc == code
    cert = json.loads(out)
    assert cert["conclusion"] == conclusion
    assert cert["assumptions"]["n"] == doc["n"] and cert["assumptions"]["q"] == doc["q"]


def test_analyze_stdin_and_text_format(capsys, monkeypatch):
    rc, out, _ = run(capsys, ["analyze", "-", "--format", "text"], json.dumps(C6), monkeypatch)
    assert rc == EXIT_NO_RULE
    assert out.startswith("conclusion: NoRuleApplies") and "fails at: G is 2-transitive" in out


def test_output_is_deterministic(tmp_path, capsys):
    path = write(tmp_path, "in.json", PGL)
    outs = {run(capsys, ["analyze", path, "--seed", "7"])[1] for _ in range(3)}
    assert len(outs) == 1


def test_round_trip_through_json(tmp_path, capsys):
    _, out, _ = run(capsys, ["analyze", write(tmp_path, "in.json", S5)])
    cert = json.loads(out)
    assert json.loads(json.dumps(cert, sort_keys=True, indent=2)) == cert
    assert json.dumps(cert, sort_keys=True, indent=2) + "\n" == out
    assert cert["version"] == 1 and cert["rule"] == "R4"
    assert all(e["status"] == "true" for e in cert["trace"])


@pytest.mark.parametrize("doc,fragment", [
    ('{"n": 5, "q": 2, "group": "(1 2"}', "parse error"),
    ('{"n": 5, "q": 2,', "line 1"),
    ('{"n": 5, "q": 6}', "error"),
    ('{"n": 5, "q": 2, "colour": 1}', "unknown field"),
    ('{"n": 6, "q": 2, "group": "S5"}', "degree"),
    ('{"q": 2}', "n is required"),
])
def test_input_errors(tmp_path, capsys, doc, fragment):
    rc, _, err = run(capsys, ["analyze", write(tmp_path, "in.json", doc)])
    assert rc == EXIT_INPUT and fragment in err


def test_polynomial_hint_and_assumed_group(tmp_path, capsys):
    path = write(tmp_path, "in.json", {"q": 2, "polynomial": "x^5 - x - 1"})
    rc, out, _ = run(capsys, ["analyze", path])
    cert = json.loads(out)
    assert rc == EXIT_NO_RULE and cert["hint"]["label"] == "LikelySn" and not cert["hint"]["certified"]
    rc, out, _ = run(capsys, ["analyze", path, "--assume-group", "S5"])
    assert rc == EXIT_OK and json.loads(out)["conclusion"] == "EndIsZ"
    rc, _, err = run(capsys, ["analyze", path, "--assume-group", "F20"])
    assert rc == EXIT_INPUT and "cycle type" in err


def test_budget_exhaustion_exit_code(tmp_path, capsys):
    path = write(tmp_path, "in.json", {"n": 8, "q": 3, "char": 0, "zeta": True, "group": "AGL1_8"})
    rc, out, _ = run(capsys, ["analyze", path, "--budget-enum", "1", "--budget-backtrack", "1"])
    assert rc == EXIT_BLOCKED and json.loads(out)["unknown_blocked"]


def test_environment_budgets(tmp_path, capsys, monkeypatch):
    path = write(tmp_path, "in.json", {"n": 8, "q": 3, "char": 0, "zeta": True, "group": "AGL1_8"})
    monkeypatch.setenv("ENDOCERT_BUDGET_ENUM", "1")
    monkeypatch.setenv("ENDOCERT_BUDGET_BACKTRACK", "1")
    rc, out, _ = run(capsys, ["analyze", path])
    assert rc == EXIT_BLOCKED and json.loads(out)["assumptions"]["budget_enum"] == 1
    rc, out, _ = run(capsys, ["analyze", path, "--budget-enum", "100000", "--budget-backtrack", "100000"])
    assert json.loads(out)["assumptions"]["budget_enum"] == 100000


def test_batch(tmp_path, capsys):
    d = tmp_path / "batch"
    d.mkdir()
    write(d, "a.json", S5)
    write(d, "b.json", C6)
    rc, out, _ = run(capsys, ["analyze", "--batch", str(d)])
    res = json.loads(out)["results"]
    assert [r["file"] for r in res] == ["a.json", "b.json"]
    assert [r["certificate"]["conclusion"] for r in res] == ["EndIsZ", "NoRuleApplies"]
    assert rc == EXIT_NO_RULE
    write(d, "c.json", "{")
    rc, out, _ = run(capsys, ["analyze", "--batch", str(d)])
    assert rc == EXIT_INPUT and "error" in json.loads(out)["results"][2]


def test_module_commands(capsys):
    rc, out, _ = run(capsys, ["module", "commutant", "--group", "S5", "--ell", "3", "--kind", "zerosum"])
    assert rc == EXIT_OK and json.loads(out)["dim"] == 4
    rc, out, _ = run(capsys, ["module", "lattice", "--group", "S6", "--ell", "3", "--kind", "full"])
    assert rc == EXIT_OK
    rc, _, _ = run(capsys, ["module", "commutant", "--group", "S5", "--ell", "4"])
    assert rc == EXIT_INPUT


def test_group_commands(capsys):
    rc, out, _ = run(capsys, ["group", "order", "--group", "(1 2 3 4 5),(1 2)"])
    assert rc == EXIT_OK and "120" in out
    rc, out, _ = run(capsys, ["group", "normal-oracle", "--group", "S5", "--d", "2"])
    assert rc == EXIT_OK and "Yes" in out
    rc, _, err = run(capsys, ["group", "order", "--group", "(1 2"])
    assert rc == EXIT_INPUT and "parse error" in err


def test_divisor_and_invariants(capsys):
    rc, out, _ = run(capsys, ["divisor", "principal", "--q", "3", "--n", "6", "--coeffs", "3,-3,0,0,0,0"])
    assert rc == EXIT_OK and json.loads(out)["principal"] is True
    rc, out, _ = run(capsys, ["divisor", "class-group", "--q", "3", "--n", "6"])
    assert json.loads(out)["invariant_factors"] == [3, 3, 3, 3]
    rc, out, _ = run(capsys, ["invariants", "--n", "7", "--q", "3"])
    assert json.loads(out)["multiplicity"] == "Exactly(2)" and json.loads(out)["two_dim"] == 12


def test_cycletypes(capsys):
    rc, out, _ = run(capsys, ["cycletypes", "x^5 - x - 1", "--max-prime", "50"])
    doc = json.loads(out)
    assert rc == EXIT_OK and doc["discriminant"] == 2869 and doc["hint"]["label"] == "LikelySn"
    rc, _, err = run(capsys, ["cycletypes", "x^5 + + 1"])
    assert rc == EXIT_INPUT and "column" in err


def test_console_script_entry_point(tmp_path):
    path = write(tmp_path, "in.json", S5)
    proc = subprocess.run([sys.executable, "-m", "endocert.cli", "analyze", path],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == EXIT_OK and json.loads(proc.stdout)["conclusion"] == "EndIsZ"
