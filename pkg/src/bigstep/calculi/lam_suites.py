"""Indexed predicates and soundness suites for the lambda-calculus."""
from __future__ import annotations

from ..enumerate import Exhaustive, GenSpec, Random, gen_welltyped
from ..soundness import IndexedPredicate, Suite
from .lam import LAM, LAM_ARITH, LAM_NO_SUCC, Abs, App, Choice, Const, Succ, Var, is_closed, show, size, subterms
from .lam_types import NAT, Arrow, show_type
from .lam_typing import ARITH_UNIVERSE, IU_UNIVERSE, SIMPLE_UNIVERSE, IUTyper, SimpleTyper

# results fed to schedules beyond the derivable ones
POOL = (Const(0), Const(1), Abs("x", Var("x")), Const(2), Abs("x", Const(0)), Abs("x", Abs("y", Var("x"))))


def pool(_c) -> tuple:
    return POOL


def closed_subterms(e) -> list:
    return [s for s in subterms(e) if s != e and is_closed(s)]


def simple_predicate(fool: bool = False) -> IndexedPredicate:
    typer = SimpleTyper(SIMPLE_UNIVERSE, fool=fool)
    search = tuple(SIMPLE_UNIVERSE) + tuple(Arrow(a, b) for a in SIMPLE_UNIVERSE for b in SIMPLE_UNIVERSE)

    def holds(t, c) -> bool:
        return typer.check((), c, t)

    def oracle(inst, t):
        # the premise types used in the proof of local preservation for each rule
        match inst.config:
            case App(f, a) if len(inst.premises) == 3:
                d = typer.app_domain((), f, a, t)
                return None if d is None else [Arrow(d, t), d, t]
            case Succ() if len(inst.premises) == 2:
                return [NAT, NAT]
            case Choice() if len(inst.premises) == 1:
                return [t]
        return None

    return IndexedPredicate("simple" + ("+fool" if fool else ""), holds, lambda c: search, oracle, show_type)


def iu_predicate(with_orE: bool = False, arith: bool = False, depth: int = 2) -> IndexedPredicate:
    typer = IUTyper(ARITH_UNIVERSE if arith else IU_UNIVERSE, with_orE=with_orE, arith=arith, depth=depth)
    name = "union" + ("-orE" if with_orE else "") + ("-arith" if arith else "")
    return IndexedPredicate(name, lambda t, c: typer.check((), c, t), lambda c: typer.universe, None, show_type)


def _corpus(calculus: str, P, exhaustive_size: int, random_count: int, random_size: int, seed: int):
    def corpus():
        out = gen_welltyped(GenSpec(calculus, exhaustive_size), P)
        if random_count:
            out += gen_welltyped(GenSpec(calculus, random_size, Random(random_count, seed)), P)
        return out
    return corpus


def lam_suite(typesystem: str, exhaustive_size: int = 6, random_count: int = 0, random_size: int = 12,
              seed: int = 0) -> Suite:
    """Named suites: (calculus, type system) pairs accepted by the command line."""
    match typesystem:
        case "simple":
            sem, P, calc = LAM, simple_predicate(), "lam"
        case "simple-fool":
            sem, P, calc = LAM, simple_predicate(fool=True), "lam"
        case "no-succ-simple":
            sem, P, calc = LAM_NO_SUCC, simple_predicate(), "lam-no-succ"
        case "union":
            sem, P, calc = LAM, iu_predicate(), "lam"
        case "arith-union":
            sem, P, calc = LAM_ARITH, iu_predicate(arith=True), "lam-arith"
        case "arith-union-orE":
            sem, P, calc = LAM_ARITH, iu_predicate(with_orE=True, arith=True), "lam-arith"
        case _:
            raise ValueError(f"unknown lambda suite {typesystem!r}")
    return Suite(f"{sem.name}/{P.name}", sem, P, _corpus(calc, P, exhaustive_size, random_count, random_size, seed),
                 pool=pool, subconfigs=closed_subterms, size=size)
