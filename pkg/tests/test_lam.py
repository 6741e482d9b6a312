import pytest
from hypothesis import given
from hypothesis import strategies as st

from bigstep.calculi.lam import (Abs, App, Choice, Const, ParseError, Plus, Succ, Var, free_vars, is_closed, parse,
                                 parse_type, show, size, subst, subterms)
from bigstep.calculi.lam_types import (EVEN, NAT, And, Arrow, Base, Mu, Or, TVar, contractive, show_type,
                                       type_equal, unfold)
from conftest import lam_terms


@pytest.mark.parametrize("src, want", [
    ("fun x . x", Abs("x", Var("x"))),
    ("(fun x . x) 3", App(Abs("x", Var("x")), Const(3))),
    ("succ 0", Succ(Const(0))),
    ("0 (+) 1", Choice(Const(0), Const(1))),
    ("+ 1 2", Plus(Const(1), Const(2))),
    ("f x y", App(App(Var("f"), Var("x")), Var("y"))),
    ("fun x : nat . x", Abs("x", Var("x"), NAT)),
])
def test_parse(src, want):
    assert parse(src) == want


@pytest.mark.parametrize("bad", ["fun x .", "(0", "0 )", "succ", "@"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse(bad)


@given(lam_terms(plus=True))
def test_print_parse_round_trip(e):
    assert parse(show(e)) == e


def test_size_measure():
    assert size(Var("x")) == 0 and size(Const(0)) == 1 and size(Abs("x", Var("x"))) == 2
    omega = parse("(fun x . x x) (fun x . x x)")
    assert size(omega) == 7


def test_free_vars_and_subst():
    e = parse("fun x . x y")
    assert free_vars(e) == {"y"} and not is_closed(e)
    assert subst(e, "y", Const(1)) == parse("fun x . x 1")
    assert subst(e, "x", Const(1)) == e
    assert len(subterms(parse("succ (0 (+) 1)"))) == 4


def test_types():
    assert parse_type("nat -> nat -> nat") == Arrow(NAT, Arrow(NAT, NAT))
    t = parse_type("rec a . a -> nat")
    assert isinstance(t, Mu) and contractive(t)
    assert isinstance(unfold(t), Arrow)
    assert type_equal(t, Arrow(t, NAT))
    assert not contractive(Mu("a", TVar("a")))
    assert parse_type("even | nat & nat") in (Or(EVEN, And(NAT, NAT)), And(Or(EVEN, NAT), NAT))


type_st = st.recursive(st.sampled_from([NAT, EVEN, Base("odd")]),
                       lambda s: st.one_of(st.tuples(s, s).map(lambda p: Arrow(*p)),
                                           st.tuples(s, s).map(lambda p: And(*p)),
                                           st.tuples(s, s).map(lambda p: Or(*p))), max_leaves=5)


@given(type_st)
def test_type_round_trip(t):
    assert parse_type(show_type(t)) == t


@given(type_st)
def test_mu_unrolling_is_equal(t):
    m = Mu("a", Arrow(t, TVar("a")))
    assert type_equal(m, unfold(m)) and type_equal(unfold(m), Arrow(t, m))
