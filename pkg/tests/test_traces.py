import json

import pytest

from bigstep.calculi.lam import LAM, OMEGA, OMEGA_HALF, Const, parse, show
from bigstep.evaluator import prove_one
from bigstep.pev import run
from bigstep.traces import (Choice, DivergenceWitness, Invalid, PeriodicTrace, Valid, finite_trace,
                            is_prefix_of_unrolling, periodic_to_json, trace_prefix, verify_divergence_witness,
                            witness_from_json)


def test_finite_trace_of_succ():
    t = prove_one(LAM, parse("succ 0"), 10)
    assert finite_trace(t) == (parse("succ 0"), Const(0), Const(1))


def test_finite_trace_of_application():
    e = parse("(fun x . x) 3")
    assert [show(c) for c in finite_trace(prove_one(LAM, e, 10))] == ["(fun x . x) 3", "fun x . x", "3", "3"]


def test_prefix_of_complete_tree_is_the_trace():
    e = parse("succ (succ 0)")
    assert trace_prefix(run(LAM, e, 100).tree) == finite_trace(prove_one(LAM, e, 10))


def test_periodic_unroll():
    p = PeriodicTrace((1,), (2, 3))
    assert p.unroll(6) == (1, 2, 3, 2, 3, 2)
    assert is_prefix_of_unrolling((1, 2, 3), p) and not is_prefix_of_unrolling((1, 3), p)
    with pytest.raises(ValueError):
        PeriodicTrace((), ())


def omega_witness(index=3):
    return DivergenceWitness.of({OMEGA: Choice("app", index)})


def test_omega_witness_valid():
    got = verify_divergence_witness(LAM, omega_witness(), 10)
    assert isinstance(got, Valid)
    p = got.trace_of(OMEGA)
    assert p.prefix == () and p.cycle == (OMEGA, OMEGA_HALF, OMEGA_HALF)


@pytest.mark.parametrize("index", [1, 2, 4, 0])
def test_omega_witness_wrong_index(index):
    assert isinstance(verify_divergence_witness(LAM, omega_witness(index), 10), Invalid)


def test_succ_witness_invalid():
    w = DivergenceWitness.of({parse("succ 0"): Choice("succ", 2)})
    got = verify_divergence_witness(LAM, w, 10)
    assert isinstance(got, Invalid) and "not a member" in got.reason


def test_two_member_witness_has_prefix():
    # (fun y . Omega) 0 reaches Omega at its third premise
    e = parse("(fun y . (fun x . x x) (fun x . x x)) 0")
    w = DivergenceWitness.of({e: Choice("app", 3), OMEGA: Choice("app", 3)})
    got = verify_divergence_witness(LAM, w, 10)
    assert isinstance(got, Valid)
    p = got.trace_of(e)
    assert p.prefix == (e, parse("fun y . (fun x . x x) (fun x . x x)"), Const(0))
    assert is_prefix_of_unrolling(trace_prefix(run(LAM, e, 500).tree), p)


def test_unknown_rule_and_results_are_invalid():
    assert isinstance(verify_divergence_witness(LAM, DivergenceWitness.of({OMEGA: Choice("succ", 1)}), 10), Invalid)
    assert isinstance(verify_divergence_witness(LAM, DivergenceWitness.of({Const(0): Choice("app", 1)}), 10), Invalid)
    assert isinstance(verify_divergence_witness(LAM, DivergenceWitness.of({}), 10), Invalid)


def test_witness_json_round_trip():
    text = json.dumps({"members": [{"config": show(OMEGA), "rule": "app", "index": 3}]})
    w = witness_from_json(text, parse)
    assert w == omega_witness()
    got = verify_divergence_witness(LAM, w, 10)
    assert periodic_to_json(got.trace_of(OMEGA), show) == {"prefix": [], "cycle": [show(OMEGA), show(OMEGA_HALF),
                                                                                  show(OMEGA_HALF)]}
    with pytest.raises(ValueError):
        witness_from_json({"members": [{"config": "0"}]}, parse)
