import random

from hypothesis import given, settings
from hypothesis import strategies as st

from bigstep.calculi.fj import Oid, parse_expr
from bigstep.calculi.fj_gen import default_table, fj_generator
from bigstep.calculi.fji import IConf, fji_predicate, fji_semantics, is_result, typecheck_fji, update
from bigstep.evaluator import Evaluator
from bigstep.pev import Converged, run_all

CT = default_table("fji")
SEM = fji_semantics(CT)


def ev(src, mem=()):
    return Evaluator(SEM).results(IConf(mem, parse_expr(src)), 40)


def test_allocation_order():
    (r,) = ev("new Pair(new A(), new B()).swap().first()")
    assert r.mem == (("A", ()), ("B", ()), ("Pair", (0, 1)), ("Pair", (1, 0)))
    assert r.expr == Oid(1)


def test_assignment_updates_memory():
    (r,) = ev("new Cell(new A()).set(new B())")
    assert r.mem == (("A", ()), ("Cell", (2,)), ("B", ()))
    assert r.expr == Oid(2)


def test_assignment_visible_to_later_reads():
    mem = (("A", ()), ("B", ()), ("Cell", (0,)))
    (r,) = ev("new Pair(#2.set(#1), #2.get()).snd", mem)
    assert r.expr == Oid(1) and r.mem[2] == ("Cell", (1,))


def test_update_helper():
    assert update((("Cell", (0,)), ("A", ())), 0, 0, 1) == (("Cell", (1,)), ("A", ()))


def test_typing_under_memory():
    assert typecheck_fji(CT, {}, {0: "Cell"}, parse_expr("#0.get()")) == "A"
    assert typecheck_fji(CT, {}, {}, parse_expr("#0.get()")) is None


def _extends(m0, m1):
    return len(m1) >= len(m0) and all(a[0] == b[0] for a, b in zip(m0, m1))


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6))
def test_memory_only_grows(seed):
    P = fji_predicate(CT)
    c = fj_generator("fji", CT).random(random.Random(seed), 10)
    if not any(P.holds(t, c) for t in P.index_universe(c)):
        return
    rs = Evaluator(SEM).results(c, 40)
    # deterministic allocation: one result at most
    assert len(rs) <= 1
    for r in rs:
        assert is_result(r) and _extends(c.mem, r.mem)
        assert r.expr.n < len(r.mem)


@settings(max_examples=20)
@given(st.integers(0, 10 ** 6))
def test_pev_agrees_with_evaluator(seed):
    c = fj_generator("fji", CT).random(random.Random(seed), 8)
    runs = run_all(SEM, c, 500, 32)
    assert {o.result for o in runs if isinstance(o, Converged)} == Evaluator(SEM).results(c, 40)
