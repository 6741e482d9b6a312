import pytest
from hypothesis import given

from bigstep import pev
from bigstep.calculi.lam import LAM, LAM_NO_SUCC, OMEGA, Const, parse
from bigstep.evaluator import eval_all
from bigstep.pev import All, First, Random
from bigstep.wrong import AllReject, Exhausted, NoRule, Propagated, Value, Wrong, eval_wrong
from conftest import closed_lam_terms


def test_zero_zero_is_wrong_at_premise_one():
    out = eval_wrong(LAM, parse("0 0"), 100)
    assert out == Wrong(AllReject(parse("0 0"), 1, Const(0)))


def test_value():
    assert eval_wrong(LAM, parse("succ ((fun x . x) 4)"), 100) == Value(Const(5))


def test_omega_exhausts():
    assert isinstance(eval_wrong(LAM, OMEGA, 500), Exhausted)


def test_no_rule_and_propagation():
    out = eval_wrong(LAM_NO_SUCC, parse("(fun x . x) (succ 0)"), 100)
    assert isinstance(out.evidence, Propagated)
    assert out.root_cause == NoRule(parse("succ 0"))
    assert out.evidence.index == 2


def test_all_strategy_lists_every_path():
    outs = eval_wrong(LAM, parse("0 (+) (0 0)"), 100, All())
    assert Value(Const(0)) in outs and any(isinstance(o, Wrong) for o in outs)


def test_fuel_must_be_positive():
    with pytest.raises(ValueError):
        eval_wrong(LAM, Const(0), 0)


def test_deep_fuel_runs_in_a_large_stack():
    assert isinstance(eval_wrong(LAM, OMEGA, 5000), Exhausted)


@given(closed_lam_terms())
def test_values_match_reference(e):
    outs = eval_wrong(LAM, e, 300, All())
    vals = {o.result for o in outs if isinstance(o, Value)}
    if not any(isinstance(o, Exhausted) for o in outs):
        assert vals == eval_all(LAM, e, 60)


@given(closed_lam_terms(choice=False))
def test_deterministic_fragment_is_exclusive(e):
    kinds = set()
    for s in (First(), Random(1), All()):
        outs = eval_wrong(LAM, e, 300, s)
        for o in outs if isinstance(outs, list) else [outs]:
            if not isinstance(o, Exhausted):
                kinds.add(type(o))
    assert len(kinds) <= 1


@given(closed_lam_terms())
def test_wrong_iff_pev_stuck(e):
    stuck = any(isinstance(o, pev.Stuck) for o in pev.run_all(LAM, e, 300))
    wrong = any(isinstance(o, Wrong) for o in eval_wrong(LAM, e, 300, All()))
    assert stuck == wrong
