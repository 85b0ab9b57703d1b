import json
import subprocess
import sys

import pytest

from refsim.cli import main

from conftest import FIXTURES

M = str(FIXTURES / "epistemic_M.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_check(capsys):
    assert run(capsys, "check", M, "[a]p")[:2] == (0, "true\n")
    assert run(capsys, "check", M, "[orig][a]p")[:2] == (1, "false\n")
    code, _, err = run(capsys, "check", M, "p & (")
    assert code == 2 and "error" in err


def test_check_point_override(capsys):
    assert run(capsys, "check", M, "p", "--point", "u1")[0] == 1
    assert run(capsys, "check", M, "p", "--point", "nope")[0] == 2


def test_reduce(capsys):
    assert run(capsys, "reduce", "<ref>p")[1] == "p\n"
    assert run(capsys, "reduce", "<sim>(<a>true & <a>false)")[1] == "false\n"
    assert run(capsys, "reduce", "<sim>(<a>true & <a>false)", "--mode", "rosml")[1] == "false\n"
    assert run(capsys, "reduce", "[orig](p|q)")[1] == "p | q\n"


def test_reduce_trace(capsys):
    code, out, err = run(capsys, "reduce", "[orig](p|q)", "--trace")
    assert code == 0 and out == "p | q\n"
    assert err.splitlines()[0].startswith("ODisj ")
    code, payload = run_json(capsys, "reduce", "[orig](p|q)", "--trace")
    assert payload["trace"][0].startswith("ODisj ")


def test_valid_and_sat(capsys):
    assert run(capsys, "valid", "[sim]p -> p")[:2] == (0, "valid\n")
    code, payload = run_json(capsys, "valid", "p -> [a]p")
    assert code == 1 and payload["countermodel"]["point"] == "w0"
    code, payload = run_json(capsys, "sat", "[a]false")
    assert code == 0 and payload["result"] and payload["witness"] is not None
    assert run(capsys, "sat", "p & ~p")[:2] == (1, "unsat\n")


def test_relate(capsys):
    code, payload = run_json(capsys, "relate", "--kind", "ref", str(FIXTURES / "mfi_p_ab.json"), M)
    assert code == 0 and ["{p}", "s"] in payload["relation"]
    code, payload = run_json(capsys, "relate", "--kind", "bisim", str(FIXTURES / "chain_M.json"), str(FIXTURES / "chain_M3.json"))
    assert code == 0


def test_relate_different_valuations(tmp_path, capsys):
    for name, val in (("p", ["p"]), ("np", [])):
        (tmp_path / f"{name}.json").write_text(json.dumps(
            {"atoms": ["p"], "agents": ["a"], "states": [{"id": "s", "val": val}], "rel": {"a": []}, "point": "s"}))
    code, payload = run_json(capsys, "relate", "--kind", "bisim", str(tmp_path / "p.json"), str(tmp_path / "np.json"))
    assert code == 1 and payload["relation"] == []


def test_mfi(capsys):
    code, payload = run_json(capsys, "mfi", "--atoms", "p", "--agents", "a,b")
    assert code == 0 and len(payload["states"]) == 2 and len(payload["rel"]["a"]) == 4
    code, payload = run_json(capsys, "mfi", "--atoms", "")
    assert len(payload["states"]) == 1
    code, payload = run_json(capsys, "mfi", "--atoms", ",".join(f"p{i}" for i in range(11)))
    assert code == 3 and payload["cap"]


def test_caps_file(tmp_path, capsys):
    caps = tmp_path / "caps.toml"
    caps.write_text("[caps]\nmfi_atoms = 1\n")
    assert run(capsys, "mfi", "--atoms", "p,q", "--caps", str(caps))[0] == 3
    caps.write_text("node_cap = 2\n")
    assert run(capsys, "sat", "<a>p & <a>q & <b>(p | q)", "--caps", str(caps))[0] == 3
    caps.write_text("bogus = 1\n")
    assert run(capsys, "sat", "p", "--caps", str(caps))[0] == 2
    assert run(capsys, "sat", "p", "--caps", str(tmp_path / "missing.toml"))[0] == 2


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["relate", "--kind", "nope", M, M]) == 2
    assert run(capsys, "check", str(FIXTURES / "missing.json"), "p")[0] == 2


def test_oracle_command(capsys):
    code, payload = run_json(capsys, "oracle", "--suite", "regression", "--max-states", "2")
    assert code == 0 and payload["passed"] and payload["name"] == "unsoundness-regression"
    code, out, _ = run(capsys, "oracle", "--suite", "origin", "--instances", "20")
    assert code == 0 and out.startswith("origin-agreement: PASS")


def test_json_schema_is_stable(capsys):
    code, payload = run_json(capsys, "check", M, "[a]p")
    assert set(payload) == {"command", "exit_code", "formula", "point", "result"}


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "refsim.cli", "reduce", "<ref>p"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "p\n"
