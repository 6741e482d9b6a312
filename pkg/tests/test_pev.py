import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bigstep import pev
from bigstep.calculi.lam import LAM, OMEGA, OMEGA_HALF, Abs, App, Choice, Const, Succ, Var, parse
from bigstep.evaluator import check_tree, eval_all
from bigstep.pev import (IRREDUCIBLE, UNKNOWN, All, Converged, Exhausted, First, Machine, Random, Stuck, init_tree,
                         invariant_violations, is_complete, run, run_all, run_trees, step, strip, to_complete,
                         tree_leq, tree_lt)
from conftest import closed_lam_terms

ID = Abs("x", Var("x"))
N = Const(3)
U = UNKNOWN


def node(c, out=U, *kids):
    return (c, out, tuple(kids))


def test_figure_sequence():
    e = App(ID, N)
    figure = [
        node(e),
        node(e, U, node(ID)),
        node(e, U, node(ID, ID)),
        node(e, U, node(ID, ID), node(N)),
        node(e, U, node(ID, ID), node(N, N)),
        node(e, U, node(ID, ID), node(N, N), node(N)),
        node(e, U, node(ID, ID), node(N, N), node(N, N)),
        node(e, N, node(ID, ID), node(N, N), node(N, N)),
    ]
    assert [strip(t) for t in run_trees(LAM, e, 100)] == figure
    out = run(LAM, e, 100, log=True)
    assert isinstance(out, Converged) and out.result == N and out.steps == 7
    assert [s.schema for s in out.log] == ["open", "result-axiom", "open-next", "result-axiom", "open-next",
                                          "result-axiom", "conclude"]
    assert strip(out.tree) == figure[-1]


def test_init_tree():
    t = init_tree(OMEGA)
    assert t.config == OMEGA and not t.known and t.children == ()


def test_result_axiom_step():
    n = step(LAM, init_tree(Const(7)))
    assert n.event.schema == "result-axiom" and strip(n.tree) == node(Const(7), Const(7))
    assert step(LAM, n.tree) is IRREDUCIBLE


def test_zero_zero_is_irreducible_after_first_premise():
    t = init_tree(App(Const(0), Const(0)))
    t = step(LAM, t).tree
    t = step(LAM, t).tree
    assert strip(t) == node(App(Const(0), Const(0)), U, node(Const(0), Const(0)))
    assert step(LAM, t) is IRREDUCIBLE


def test_outcomes():
    assert isinstance(run(LAM, OMEGA, 10000), Exhausted)
    assert isinstance(run(LAM, parse("succ (fun x . x)"), 100), Stuck)
    with pytest.raises(ValueError):
        run(LAM, OMEGA, 0)


def test_omega_prefix_repeats():
    out = run(LAM, OMEGA, 3000)
    from bigstep.traces import trace_prefix
    tr = trace_prefix(out.tree)
    cycle = (OMEGA, OMEGA_HALF, OMEGA_HALF)
    assert tr[:300] == cycle * 100


def test_strategies_on_choice():
    e = Choice(Const(0), Const(1))
    assert run(LAM, e, 10, First()).result == Const(0)
    results = {o.result for o in run(LAM, e, 10, All())}
    assert results == {Const(0), Const(1)}
    seen = {run(LAM, e, 10, Random(s)).result for s in range(20)}
    assert seen == {Const(0), Const(1)}
    assert run(LAM, e, 10, Random(4)) == run(LAM, e, 10, Random(4))


def test_parse_strategy():
    assert pev.parse_strategy("all", budget=5) == All(5)
    with pytest.raises(ValueError):
        pev.parse_strategy("fastest")


def test_order_basics():
    seq = list(run_trees(LAM, App(ID, N), 100))
    for a, b in zip(seq, seq[1:]):
        assert tree_lt(a, b)
    assert tree_leq(seq[0], seq[0]) and not tree_lt(seq[0], seq[0])
    assert not tree_leq(seq[-1], seq[0])
    assert is_complete(seq[-1]) and not is_complete(seq[0])
    assert check_tree(LAM, to_complete(seq[-1]))
    with pytest.raises(ValueError):
        to_complete(seq[0])


@given(closed_lam_terms(), st.integers(0, 3))
def test_zipper_matches_reference_step(e, seed):
    """The machine and the immutable step relation visit the same trees."""
    for s in (First(), Random(seed)):
        ref = [strip(t) for t in run_trees(LAM, e, 300, s)]
        seen = []
        run(LAM, e, 300, s, on_step=lambda t: seen.append(strip(t)))
        assert seen == ref


@given(closed_lam_terms())
def test_reachable_trees_are_well_formed(e):
    bad = []

    def edge(a, b):
        if not tree_lt(a, b):
            bad.append("order")
        bad.extend(invariant_violations(b))
        if b.known and not is_complete(b):
            bad.append("root known")

    run_all(LAM, e, 200, on_edge=edge)
    assert bad == []


@given(closed_lam_terms())
def test_successors_cover_all_runs(e):
    """All-runs results equal the results reachable through successors."""
    frontier, results = [init_tree(e)], set()
    for _ in range(60):
        nxt = []
        for t in frontier:
            if t.known:
                results.add(t.outcome)
            else:
                nxt.extend(n.tree for n in pev.successors(LAM, t))
        frontier = nxt
    runs = run_all(LAM, e, 60)
    assert {o.result for o in runs if isinstance(o, Converged)} == results


@given(closed_lam_terms())
def test_conservative_on_random_terms(e):
    runs = run_all(LAM, e, 400)
    conv = {o.result for o in runs if isinstance(o, Converged)}
    if all(not isinstance(o, Exhausted) for o in runs):
        assert conv == eval_all(LAM, e, 60)


def test_invariant_violations_detects_bad_shapes():
    from bigstep.pev import PartialTree
    bad = PartialTree(Const(0), U, (PartialTree(Const(1)), PartialTree(Const(2), Const(2))))
    assert any("not the last" in m for m in invariant_violations(bad))
    two = PartialTree(Const(0), U, (PartialTree(Const(1), U, (PartialTree(Const(3)),)), PartialTree(Const(2))))
    assert any("unknown nodes" in m for m in invariant_violations(two))
    up = PartialTree(Const(0), Const(0), (PartialTree(Const(1)),))
    assert invariant_violations(up)


def test_machine_clone_is_independent():
    m = Machine(LAM, Choice(Const(0), Const(1)))
    mv = m.moves()
    other = m.clone()
    m.apply(mv[0])
    other.apply(mv[1])
    assert m.tree().children[0].config == Const(0) and other.tree().children[0].config == Const(1)
