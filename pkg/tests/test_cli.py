import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from naw.cli import main, parse_pairs, run, UsageError
from naw.certificate import Certificate, jsonable, write_atomic

GOLDEN = Path(__file__).parent / "golden"

# (golden name, argv, expected exit code)
CASES = [
    ("egroup_3_1", ["egroup", "--d", "3", "--j", "1", "--verify"], 0),
    ("egroup_1_0", ["egroup", "--d", "1", "--j", "0"], 0),
    ("egroup_2_1", ["egroup", "--d", "2", "--j", "1", "--verify"], 0),
    ("heisenberg_1_4", ["heisenberg", "--n", "1", "--d", "4", "--decompose"], 0),
    ("heisenberg_2_2", ["heisenberg", "--n", "2", "--d", "2", "--decompose"], 0),
    ("heisenberg_1_1", ["heisenberg", "--n", "1", "--d", "1"], 0),
    ("action_cp", ["action", "CP(E(2,0),E(2,0))"], 0),
    ("action_e30", ["action", "E(3,0)"], 0),
    ("action_a5", ["action", "A(5)"], 0),
    ("bundle_1_1_2", ["bundle", "--n", "1", "--m", "1", "--d", "2"], 0),
    ("bundle_2_1_2", ["bundle", "--n", "2", "--m", "1", "--d", "2"], 0),
    ("bundle_remark53", ["bundle", "--n", "1", "--m", "1", "--d", "2", "--delta-mode", "remark53"], 0),
    ("manifold_11", ["manifold", "--I", "(1,1)", "--r", "1"], 0),
    ("manifold_11_21", ["manifold", "--I", "(1,1);(2,1)", "--r", "2"], 0),
    ("manifold_empty", ["manifold", "--I", ""], 2),
    ("ghys_2_0", ["ghys", "--d", "2", "--j", "0"], 0),
    ("waring_2_8", ["waring", "--k", "2", "--modulus", "8"], 0),
    ("special_z2cubed", ["special", "DP(A(2),A(2),A(2))", "--p", "2"], 0),
]


def certificate_text(argv):
    cert, code, _ = run(argv)
    return cert.dumps(), code


@pytest.mark.parametrize("name,argv,code", CASES, ids=[c[0] for c in CASES])
def test_golden(name, argv, code):
    text, got = certificate_text(argv)
    assert got == code
    obj = json.loads(text)
    assert obj["status"] == {0: "pass", 1: "fail", 2: "inconclusive"}[code]
    path = GOLDEN / f"{name}.json"
    if os.environ.get("NAW_REGEN_GOLDEN"):
        path.write_text(text)
    assert path.read_text() == text


def test_spec_examples_content():
    obj = json.loads(certificate_text(CASES[0][1])[0])
    assert obj["artifacts"]["group"]["order"] == 27
    obj = json.loads(certificate_text(["egroup", "--d", "2", "--j", "1", "--verify"])[0])
    assert obj["artifacts"]["isomorphic_to_Q8"] is True
    obj = json.loads(certificate_text(["heisenberg", "--n", "2", "--d", "2", "--decompose"])[0])
    assert obj["artifacts"]["factors"] == 2
    obj = json.loads(certificate_text(["action", "CP(E(2,0),E(2,0))"])[0])
    assert obj["artifacts"]["rho_f"]["order"] == 32 and obj["artifacts"]["rho_f"]["faithful"]
    obj = json.loads(certificate_text(["action", "E(3,0)"])[0])
    assert obj["artifacts"]["leaf"]["B_order"] == 9
    obj = json.loads(certificate_text(["bundle", "--n", "1", "--m", "1", "--d", "2"])[0])
    assert obj["artifacts"]["rank"] == 3
    obj = json.loads(certificate_text(["bundle", "--n", "2", "--m", "1", "--d", "2"])[0])
    assert obj["artifacts"]["rank"] == 20
    obj = json.loads(certificate_text(["bundle", "--n", "1", "--m", "1", "--d", "2", "--delta-mode", "remark53"])[0])
    assert obj["artifacts"]["deltas"] == [2]
    obj = json.loads(certificate_text(["manifold", "--I", "(1,1)"])[0])
    assert obj["artifacts"]["manifold"] == "(T^2 x U(3))"
    obj = json.loads(certificate_text(["ghys", "--d", "2", "--j", "0"])[0])
    assert sum(1 for c in obj["checks"] if c["name"].startswith("symbolic")) == 5
    assert obj["artifacts"]["det_audit"]["special_unitary_claim_consistent"] is False
    obj = json.loads(certificate_text(["waring", "--k", "2", "--modulus", "8"])[0])
    assert obj["artifacts"]["M"] == 4 and sorted(obj["artifacts"]["witness"]) == [1, 1, 1, 2]
    obj = json.loads(certificate_text(["special", "DP(A(2),A(2),A(2))", "--p", "2"])[0])
    assert obj["artifacts"]["branch"] == "elementary_abelian"


@pytest.mark.parametrize("argv", [
    ["egroup", "--d", "3", "--j", "5"],
    ["egroup", "--d", "17", "--j", "0"],
    ["action", "X(3)"],
    ["action", "CP(E(2,0))"],
    ["action", "CP(E(2,0),E(2,0))", "--z", "1"],
    ["manifold", "--I", "(1,a)"],
    ["bundle", "--n", "5", "--m", "1", "--d", "2"],
    ["special", "A(4)", "--p", "2"],
    ["waring", "--k", "0", "--modulus", "5"],
])
def test_errors_exit_2(argv):
    cert, code, _ = run(argv)
    assert code == 2 and "error" in cert.artifacts and cert.checks == []


def test_numeric_ghys_reports_beta_relation():
    cert, code, _ = run(["ghys", "--d", "2", "--j", "0", "--numeric-samples", "10"])
    failed = [c["name"] for c in cert.checks if c["status"] == "fail"]
    assert failed == ["numeric: rho(beta)^d = rho(gamma)^j"] and code == 1
    cert, code, _ = run(["ghys", "--d", "2", "--j", "1", "--numeric-samples", "10"])
    assert code == 0


def test_cap_override(monkeypatch):
    monkeypatch.setenv("NAW_MAX_ORDER", "20")
    assert run(["egroup", "--d", "3", "--j", "0"])[1] == 2
    monkeypatch.setenv("NAW_MAX_ORDER", "27")
    assert run(["egroup", "--d", "3", "--j", "0"])[1] == 0


def test_out_file(tmp_path, capsys):
    out = tmp_path / "c.json"
    code = main(["waring", "--k", "3", "--modulus", "9", "--out", str(out)])
    assert code == 0
    obj = json.loads(out.read_text())
    assert obj["schema"] == 1 and obj["command"] == "waring"
    assert "pass" in capsys.readouterr().out
    code = main(["ghys", "--d", "2", "--j", "1", "--emit-cert", str(tmp_path / "g.json")])
    assert code == 0 and (tmp_path / "g.json").exists()


def test_exit_code_rules():
    c = Certificate("x", {})
    assert c.exit_code() == 2
    c.check("a", "inconclusive")
    assert c.exit_code() == 2
    c.check("b", True)
    assert c.exit_code() == 0
    c.check("c", False)
    assert c.exit_code() == 1
    with pytest.raises(ValueError):
        c.check("d", "maybe")


def test_atomic_write_leaves_no_temp(tmp_path):
    p = tmp_path / "x.json"
    write_atomic(p, "{}\n")
    write_atomic(p, "[]\n")
    assert p.read_text() == "[]\n"
    assert [f.name for f in tmp_path.iterdir()] == ["x.json"]


def test_jsonable_rejects_unknown():
    with pytest.raises(TypeError):
        jsonable(object())
    assert jsonable({1: (2, {3})}) == {"1": [2, [3]]}


def test_parse_pairs():
    assert parse_pairs("(1,1); (2,1)") == [(1, 1), (2, 1)]
    with pytest.raises(UsageError):
        parse_pairs(" ; ")
    with pytest.raises(UsageError):
        parse_pairs("(0,1)")


def test_console_script_entry():
    r = subprocess.run([sys.executable, "-m", "naw.cli", "waring", "--k", "2", "--modulus", "4"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0
    assert json.loads(r.stdout)["artifacts"]["M"] == 3
