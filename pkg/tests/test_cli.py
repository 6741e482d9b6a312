import json
from pathlib import Path

from bigstep.cli import main

ROOT = Path(__file__).resolve().parents[1]
OMEGA = "(fun x . x x) (fun x . x x)"


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_eval_standard(capsys):
    code, out = run(capsys, "eval", "(fun x . x) 3")
    assert code == 0 and "3" in out


def test_eval_trace(capsys):
    code, out = run(capsys, "eval", "--trace", "succ 0")
    assert code == 0 and "[succ 0, 0, 1]" in out


def test_eval_pev_steps(capsys):
    code, out = run(capsys, "eval", "--mode", "pev", "(fun x . x) 3")
    steps = [ln for ln in out.splitlines() if ln.strip()[:1].isdigit()]
    assert [ln.split()[1] for ln in steps] == ["open", "result-axiom", "open-next", "result-axiom",
                                            "open-next", "result-axiom", "conclude"]
    assert code == 0 and "converged to 3 in 7 steps" in out


def test_eval_wrong(capsys):
    code, out = run(capsys, "eval", "--mode", "wrong", "succ (fun x . x)")
    assert "wrong" in out.lower()


def test_eval_strict_divergence(capsys):
    code, _ = run(capsys, "eval", "--mode", "pev", "--fuel", "200", "--strict", OMEGA)
    assert code == 1


def test_eval_fj_program(capsys, tmp_path):
    p = tmp_path / "prog.fj"
    p.write_text("class A {} class B { A a; } new B(new A()).a")
    code, out = run(capsys, "eval", "--calculus", "fjl", str(p))
    assert code == 0 and "A()" in out


def test_usage_errors(capsys):
    assert main(["eval", "(fun x . "]) == 2
    assert main(["eval", "--calculus", "fjl", "class A extends Missing {} new A()"]) == 2
    assert main(["witness", str(ROOT / "pyproject.toml")]) == 2
    assert main(["frobnicate"]) == 2


def test_check_pass_and_fail(capsys):
    code, out = run(capsys, "check", "lam", "simple", "--size", "4")
    assert code == 0, out
    code, out = run(capsys, "check", "lam-no-succ", "simple", "--size", "4")
    assert code == 1 and "S2" in out


def test_check_json_is_deterministic(capsys):
    argv = ["check", "lam", "union", "--size", "4", "--count", "20", "--seed", "3", "--json"]
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv)
    ja, jb = json.loads(a), json.loads(b)
    assert ja.pop("generated_at") and jb.pop("generated_at")
    assert ja == jb and json.dumps(ja, sort_keys=True) == json.dumps(jb, sort_keys=True)


def test_check_fj_table(capsys):
    table = ROOT / "src/bigstep/calculi/tables/fjl_field.fj"
    code, out = run(capsys, "check", "fjl", str(table), "--size", "3")
    assert code == 0, out


def test_xcheck(capsys):
    code, out = run(capsys, "xcheck", "lam", "--size", "4", "--json")
    j = json.loads(out)
    assert code == 0 and j["status"] == "Pass" and j["configurations"] == 88


def test_witness(capsys):
    code, out = run(capsys, "witness", str(ROOT / "witnesses/omega.witness.json"))
    assert code == 0 and out.startswith("Valid")
    code, out = run(capsys, "witness", str(ROOT / "witnesses/succ-invalid.witness.json"))
    assert code == 1 and out.startswith("Invalid")
