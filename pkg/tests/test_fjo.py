import random

from hypothesis import given, settings
from hypothesis import strategies as st

from bigstep.calculi.fj import TRUE, New, parse_expr
from bigstep.calculi.fj_gen import default_table, fj_generator
from bigstep.calculi.fjo import atoms, fjo_predicate, fjo_semantics, is_value, typecheck_fjo
from bigstep.evaluator import Evaluator

CT = default_table("fjo")
SEM = fjo_semantics(CT)


def ev(src):
    return Evaluator(SEM).results(parse_expr(src, unions=True), 40)


def test_overloaded_eq_on_matching_pairs():
    for k in ("C", "D"):
        src = f"new Eq().eq(new {k}(new Pt()), new {k}(new Pt()))"
        assert typecheck_fjo(CT, {}, parse_expr(src, unions=True)) == frozenset({"bool"})
        assert ev(src) == {TRUE}


def test_mixed_pair_rejected():
    assert typecheck_fjo(CT, {}, parse_expr("new Eq().eq(new C(new Pt()), new D(new Pt()))", unions=True)) is None


def test_union_return():
    e = parse_expr("new Sel().pick(true)", unions=True)
    assert typecheck_fjo(CT, {}, e) == frozenset({"C", "D"})
    assert ev("new Sel().pick(true)") == {New("C", (New("Pt", ()),))}
    assert ev("new Sel().pick(false)") == {New("D", (New("Pt", ()),))}


def test_if_needs_a_boolean():
    e = parse_expr("if new Pt() then true else false", unions=True)
    assert typecheck_fjo(CT, {}, e) is None
    assert ev("if new Pt() then true else false") == set()


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6))
def test_results_are_values_of_a_checked_type(seed):
    P = fjo_predicate(CT)
    e = fj_generator("fjo", CT).random(random.Random(seed), 10)
    ts = [t for t in P.index_universe(e) if P.holds(t, e)]
    for v in Evaluator(SEM).results(e, 40):
        assert is_value(v)
        for t in ts:
            assert P.holds(t, v)


def test_union_types_are_atom_sets():
    assert atoms("C") == {"C"}
    assert atoms(frozenset({"C", "D"})) == {"C", "D"}
