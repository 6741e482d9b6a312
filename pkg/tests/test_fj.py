import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bigstep.calculi.fj import (Cast, ClassTableError, FieldAccess, FieldAssign, If, Invk, Lam, New, Oid, Var,
                                free_vars, parse_expr, parse_program, show, size, subst)
from bigstep.calculi.fj_gen import config_expr, default_table, fj_generator, table_source
from bigstep.calculi.fjl import load_fjl
from bigstep.calculi.fjo import load_fjo


@pytest.mark.parametrize("src, want", [
    ("x.f", FieldAccess(Var("x"), "f")),
    ("new C(x, y)", New("C", (Var("x"), Var("y")))),
    ("x.m(y)", Invk(Var("x"), "m", (Var("y"),))),
    ("<I> (x) -> x", Cast("I", Lam(("x",), Var("x")))),
    ("(x, y) -> y", Lam(("x", "y"), Var("y"))),
    ("x.f = y", FieldAssign(Var("x"), "f", Var("y"))),
    ("#3.f", FieldAccess(Oid(3), "f")),
])
def test_parse_expr(src, want):
    assert parse_expr(src) == want


def test_if_needs_unions():
    e = parse_expr("if true then x else y", unions=True)
    assert isinstance(e, If)


def test_helpers():
    e = parse_expr("new C(x.f, (y) -> y)")
    assert free_vars(e) == {"x"}
    assert subst(e, {"x": Var("z")}) == parse_expr("new C(z.f, (y) -> y)")
    assert size(e) == 5


TABLES = {"fjl": default_table("fjl"), "fjo": default_table("fjo"), "fji": default_table("fji")}


@given(st.sampled_from(sorted(TABLES)), st.integers(0, 10 ** 6))
def test_print_parse_round_trip(calc, seed):
    g = fj_generator(calc, TABLES[calc])
    e = config_expr(g.random(random.Random(seed), 12))
    assert parse_expr(show(e), unions=calc == "fjo") == e


def test_program_with_main():
    ct, main = parse_program("class A {} new A()")
    assert ct.is_class("A") and main == New("A", ())


@pytest.mark.parametrize("src, constraint", [
    ("class A extends B {}", "known types"),
    ("class A extends B {} class B extends A {}", "acyclic hierarchy"),
    ("class A { A f; } class B extends A { A f; }", "no field hiding"),
    ("class A { A m() { return this; } A m() { return this; } }", "no overloading"),
    ("class A { A m() { return this; } } class B extends A { B m() { return new B(); } }",
     "same types in overriding"),
    ("interface I { I m(); } class A implements I {}", "interface implemented"),
])
def test_class_table_rejections(src, constraint):
    with pytest.raises(ClassTableError) as ei:
        load_fjl(src)
    assert ei.value.constraint == constraint


def test_body_must_typecheck():
    with pytest.raises(ClassTableError) as ei:
        load_fjl("class A {} class B { A m() { return new B(); } }")
    assert ei.value.constraint == "method bodies typecheck"


@given(st.sampled_from(["A", "B", "C"]), st.sampled_from(["A", "B", "C"]))
def test_override_must_keep_return_type(r1, r2):
    src = (f"class A {{}} class B extends A {{}} class C extends B {{}} "
           f"class P {{ {r1} m() {{ return new {r1}(); }} }} class Q extends P {{ {r2} m() {{ return new {r2}(); }} }}")
    if r1 == r2:
        load_fjl(src)
    else:
        with pytest.raises(ClassTableError):
            load_fjl(src)


def test_shipped_tables_load():
    for name, loader in [("fjl", load_fjl), ("fjl_bare", load_fjl), ("fjl_field", load_fjl), ("fjo", load_fjo)]:
        assert loader(table_source(name))[0].classes


def test_subtyping_and_functional_interfaces():
    ct = default_table("fjl")
    assert ct.subtype("B", "A") and ct.subtype("Id", "J") and not ct.subtype("A", "B")
    assert ct.functional("I").name == "m" and ct.functional("J") is None
    assert ct.mtype("I", "m") == ((("A",),), "A")
