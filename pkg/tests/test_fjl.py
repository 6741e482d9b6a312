import pytest

from bigstep.calculi.fj import Lam, Var, parse_expr
from bigstep.calculi.fj_gen import default_table
from bigstep.calculi.fjl import Obj, conf, fjl_predicate, fjl_semantics, typecheck_fjl
from bigstep.evaluator import Evaluator
from bigstep.pev import All, Converged, run_all

IDENT = Lam(("x",), Var("x"))


@pytest.fixture(scope="module")
def field_table():
    return default_table("fjl", "fjl_field")


@pytest.fixture(scope="module")
def bare_table():
    return default_table("fjl", "fjl_bare")


def test_cast_lambda_is_stored(field_table):
    e = parse_expr("new C(<I> (x) -> x)")
    assert typecheck_fjl(field_table, {}, e) == "C"
    assert Evaluator(fjl_semantics(field_table)).results(conf((), e), 20) == {Obj("C", (IDENT,))}


def test_pev_agrees_on_cast_lambda(field_table):
    e = parse_expr("new C(<I> (x) -> x)")
    runs = run_all(fjl_semantics(field_table), conf((), e), 200)
    assert [o.result for o in runs if isinstance(o, Converged)] == [Obj("C", (IDENT,))]


@pytest.mark.parametrize("src", ["new C((x) -> x)", "new C(<I> (x) -> x).n((x) -> x)"])
def test_uncast_lambda_at_non_functional_type(field_table, src):
    assert typecheck_fjl(field_table, {}, parse_expr(src)) is None


def test_rejection_is_about_the_target_type(field_table, bare_table):
    # n expects J, which has no method, so only the cast variant is typable
    assert typecheck_fjl(field_table, {}, parse_expr("new C(<I> (x) -> x).n(<I> (x) -> x)")) == "C"
    assert typecheck_fjl(bare_table, {}, parse_expr("new C().n((x) -> x)")) is None
    assert typecheck_fjl(bare_table, {}, parse_expr("new C().n(<I> (x) -> x)")) == "C"


def test_lambda_invocation():
    ct = default_table("fjl")
    e = parse_expr("(<I> (x) -> x).m(new A())")
    assert typecheck_fjl(ct, {}, e) == "A"
    assert Evaluator(fjl_semantics(ct)).results(conf((), e), 20) == {Obj("A", ())}


def test_environment_configurations():
    ct = default_table("fjl")
    c = conf((("y", Obj("A", ())),), parse_expr("y"))
    assert Evaluator(fjl_semantics(ct)).results(c, 5) == {Obj("A", ())}
    P = fjl_predicate(ct)
    assert P.holds("A", c) and not P.holds("B", c)


def test_stuck_on_unbound_variable():
    ct = default_table("fjl")
    runs = run_all(fjl_semantics(ct), conf((), Var("z")), 50, 16)
    assert not any(isinstance(o, Converged) for o in runs)
