import pytest
from hypothesis import given

from bigstep.calculi.lam import LAM, OMEGA, Abs, App, Choice, Const, Succ, Var, parse
from bigstep.evaluator import CompleteTree, Evaluator, check_tree, eval_all, prove_all, prove_one
from conftest import closed_lam_terms

ID = Abs("x", Var("x"))


@pytest.mark.parametrize("src, want", [
    ("(fun x . x) 3", {Const(3)}),
    ("succ ((fun x . x) 4)", {Const(5)}),
    ("0 (+) 1", {Const(0), Const(1)}),
    ("succ (fun x . x)", set()),
    ("0 0", set()),
    ("fun x . x x", {parse("fun x . x x")}),
])
def test_eval_all(src, want):
    assert eval_all(LAM, parse(src), 20) == want


def test_omega_has_no_finite_derivation():
    assert eval_all(LAM, OMEGA, 60) == frozenset()


def test_depth_is_height():
    e = parse("(fun x . x) 3")
    # the app node sits above three axioms
    assert eval_all(LAM, e, 1) == frozenset()
    assert eval_all(LAM, e, 2) == {Const(3)}
    assert prove_one(LAM, e, 2).height() == 2


def test_prove_one_respects_the_requested_result():
    t = prove_one(LAM, Choice(Const(0), Const(1)), 5, Const(1))
    assert t.result == Const(1) and t.children[0].config == Const(1)
    assert prove_one(LAM, Choice(Const(0), Const(1)), 5, Const(2)) is None


def test_prove_all_lists_each_derivation():
    ts = prove_all(LAM, Choice(Const(0), Const(0)), 5)
    assert {t.rule_id for t in ts} <= {"choice/1", "choice/2", ""}
    assert len(ts) == 2


def test_depth_must_be_positive():
    with pytest.raises(ValueError):
        eval_all(LAM, Const(0), 0)


def test_check_tree_rejects_forged_trees():
    good = prove_one(LAM, Succ(Const(1)), 5)
    assert check_tree(LAM, good)
    forged = CompleteTree(good.config, Const(7), good.children[:-1] + (CompleteTree(Const(7), Const(7)),))
    assert not check_tree(LAM, forged)


@given(closed_lam_terms())
def test_every_found_tree_replays(e):
    ev = Evaluator(LAM)
    rs = ev.results(e, 12)
    for r in rs:
        t = next(ev.trees(e, 12, r))
        assert t.result == r and check_tree(LAM, t)
    # no tree exists for anything else
    assert {t.result for t in prove_all(LAM, e, 12, limit=50)} <= rs


def test_rule_exceeding_its_bound_is_reported():
    from bigstep.kernel import BoundViolation, SemanticsDef, start

    def rules(c):
        return [start("loop", c, 0, lambda rs: 0)]
    sem = SemanticsDef("loop", lambda c: c == 0, rules, bound=3)
    with pytest.raises(BoundViolation):
        Evaluator(sem).results("c", 10)
