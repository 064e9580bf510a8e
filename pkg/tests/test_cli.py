import json
from pathlib import Path

import pytest

from linctx.cli import EXIT_FAIL, EXIT_INCOMPLETE, EXIT_OK, EXIT_USAGE, main

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


def P(name: str) -> str:
    return str(PROGRAMS / name)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def records(out: str):
    return [json.loads(line) for line in out.splitlines()]


def test_typecheck(capsys):
    code, out = run(capsys, "typecheck", P("f1.lpcf"))
    assert code == EXIT_OK
    assert records(out) == [{"command": "typecheck", "file": P("f1.lpcf"), "type": "T (Nat -> T Nat)"}]


def test_typecheck_rejects_nonlinear(capsys):
    code, out = run(capsys, "typecheck", P("illtyped.lpcf"))
    assert code == EXIT_USAGE
    assert records(out)[0]["error"] == "LinearityViolation"


def test_parse_error_has_position(capsys, tmp_path):
    f = tmp_path / "bad.lpcf"
    f.write_text("val(\n  fn x:Nat. )\n")
    code, out = run(capsys, "typecheck", str(f))
    rec = records(out)[0]
    assert code == EXIT_USAGE
    assert rec["error"] == "ParseError"
    assert rec["line"] == 2 and rec["column"] >= 1


def test_missing_file(capsys):
    code, out = run(capsys, "typecheck", P("nope.lpcf"))
    assert code == EXIT_USAGE
    assert "error" in records(out)[0]


def test_bad_usage(capsys):
    assert main(["frobnicate"]) == EXIT_USAGE
    assert main(["eval", P("three.lpcf"), "--fuel", "0"]) == EXIT_USAGE


@pytest.mark.parametrize("name, outcomes", [
    ("distinguisher_f1.lpcf", ["val(false)", "val(true)"]),
    ("distinguisher_f2.lpcf", ["val(true)"]),
])
def test_eval_distinguisher(capsys, name, outcomes):
    code, out = run(capsys, "eval", P(name), "--fuel", "200")
    rec = records(out)[0]
    assert code == EXIT_OK
    assert rec["outcomes"] == outcomes and rec["type"] == "T Bool"


def test_eval_omega_cycles(capsys, tmp_path):
    f = tmp_path / "om.lpcf"
    f.write_text("omega[Nat]")
    code, out = run(capsys, "eval", str(f))
    rec = records(out)[0]
    assert code == EXIT_OK and rec["outcomes"] == [] and rec["cycle_detected"]


def test_equiv_f1_f2(capsys):
    code, out = run(capsys, "equiv", P("f1.lpcf"), P("f2.lpcf"), "--pool-size", "1", "--fuel", "100")
    rec = records(out)[0]
    assert code == EXIT_OK
    assert rec["verdict"] == "equivalent-within-bounds"
    assert "counterexample" not in rec


def test_equiv_inequivalent(capsys, tmp_path):
    f = tmp_path / "four.lpcf"
    f.write_text("4")
    code, out = run(capsys, "equiv", P("three.lpcf"), str(f))
    rec = records(out)[0]
    assert code == EXIT_FAIL
    assert rec["verdict"] == "inequivalent"
    assert rec["counterexample"]["trace"] in ("3", "4")


def test_traces(capsys):
    code, out = run(capsys, "traces", P("f1.lpcf"), "--pool-size", "1", "--depth", "4")
    recs = records(out)
    assert code == EXIT_OK
    traces = [r["trace"] for r in recs[:-1]]
    assert "T, @(0), T, 0" in traces and "T, @(0), T, 1" in traces
    assert recs[-1]["count"] == len(traces) and recs[-1]["complete"]


def test_traces_truncated(capsys, tmp_path):
    f = tmp_path / "count.lpcf"
    f.write_text("fix[Nat -> Nat] (fn! f:Nat -> Nat. fn! n:Nat. f (succ n)) 0")
    code, out = run(capsys, "traces", str(f), "--fuel", "20")
    assert code == EXIT_INCOMPLETE
    assert records(out)[-1]["complete"] is False


def test_lcr(capsys):
    code, out = run(capsys, "lcr", P("pred.ctx"), P("three.lpcf"), "--hole-type", "Nat")
    recs = records(out)
    assert code == EXIT_OK
    assert recs[0]["form"] == "interaction" and recs[0]["action"] == "3"
    assert recs[0]["successor"] == "2"
    assert recs[-1] == {"command": "lcr", "successors": 1}


def test_lcr_type_mismatch(capsys):
    code, out = run(capsys, "lcr", P("pred.ctx"), P("f1.lpcf"), "--hole-type", "Nat")
    assert code == EXIT_USAGE


def test_scontext(capsys):
    code, out = run(capsys, "scontext", "--trace", P("t1.trace"), "--hole-type", "T (Nat -> T Nat)")
    rec = records(out)[0]
    assert code == EXIT_OK
    assert rec["trace"] == "T, @(0), T, 1"
    assert rec["result_type"] == "T Nat"
    assert rec["context"].startswith("bind y1 = HOLE in")


def test_check(capsys):
    code, out = run(capsys, "check", "determinacy", "--max-size", "3", "--count", "5")
    rec = records(out)[0]
    assert code == EXIT_OK and rec["passed"] and rec["name"] == "determinacy"


def test_check_unknown(capsys):
    code, out = run(capsys, "check", "nonsense")
    assert code == EXIT_USAGE and records(out)[0]["error"] == "UnknownCheck"


def test_pretty(capsys):
    code, out = run(capsys, "eval", P("distinguisher_f2.lpcf"), "--pretty")
    assert code == EXIT_OK
    assert "outcomes: {val(true)}" in out
    with pytest.raises(json.JSONDecodeError):
        json.loads(out)


def test_seed_env_override(capsys, monkeypatch):
    argv = ["check", "subject_reduction", "--max-size", "2", "--count", "10"]
    monkeypatch.setenv("LINCTX_SEED", "3")
    _, a = run(capsys, *argv, "--seed", "99")
    _, b = run(capsys, *argv, "--seed", "3")
    monkeypatch.delenv("LINCTX_SEED")
    _, c = run(capsys, *argv, "--seed", "3")
    assert a == b == c


def test_output_is_deterministic(capsys):
    argv = ["traces", P("f2.lpcf"), "--pool-size", "2", "--depth", "4"]
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv)
    assert a == b
