import pytest
from hypothesis import given
from hypothesis import strategies as st

from bigstep.calculi.lam import Abs, parse, subterms
from bigstep.calculi.lam_types import EVEN, NAT, ODD, And, Arrow, Or
from bigstep.calculi.lam_typing import (ARITH_UNIVERSE, IU_UNIVERSE, OMEGA_T, IUTyper, SimpleTyper, env_of,
                                        subtype_iu, typable_iu, typecheck_simple)
from bigstep.enumerate import GenSpec, gen_terms

NN = Arrow(NAT, NAT)


@pytest.mark.parametrize("src, t, ok", [
    ("0", NAT, True),
    ("fun x . x", NN, True),
    ("(fun x . x) 3", NAT, True),
    ("succ (fun x . x)", NAT, False),
    ("0 0", NAT, False),
    ("0 (+) 1", NAT, True),
    ("0 (+) (fun x . x)", NAT, False),
    ("fun x . x x", Arrow(OMEGA_T, NAT), True),
    ("(fun x . x x) (fun x . x x)", NAT, True),
])
def test_simple(src, t, ok):
    assert typecheck_simple(None, parse(src), t) is ok


def test_fool_types_zero_zero_only():
    ty = SimpleTyper(fool=True)
    assert ty.check((), parse("0 0"), NAT)
    assert not ty.check((), parse("1 0"), NAT)


def test_simple_env():
    assert typecheck_simple({"f": NN}, parse("f 0"), NAT)
    assert env_of({"b": NAT, "a": NAT}) == (("a", NAT), ("b", NAT))


def test_iu_intersection_and_union():
    assert typable_iu(None, parse("fun x . x"), And(NN, Arrow(NN, NN)))
    assert typable_iu(None, parse("0 (+) (fun x . x)"), Or(NAT, NN))
    assert not typable_iu(None, parse("0 (+) (fun x . x)"), NAT)


def test_or_elimination_types_the_duplication():
    e = parse("+ (1 (+) 2) (1 (+) 2)")
    assert not typable_iu(None, e, EVEN)
    assert typable_iu(None, e, EVEN, with_orE=True)
    assert typable_iu(None, parse("+ 1 1"), EVEN)


def test_subtype_iu():
    assert subtype_iu(And(NAT, NN), NAT) and subtype_iu(NAT, Or(NN, NAT))
    assert not subtype_iu(NAT, And(NAT, NN)) and not subtype_iu(Or(NAT, NN), NAT)


CORPUS = [e for e in gen_terms(GenSpec("lam", 5))]


@given(st.sampled_from(CORPUS), st.sampled_from(IU_UNIVERSE), st.sampled_from(IU_UNIVERSE))
def test_derive_is_closed_under_subtyping(e, a, b):
    """Two routes to the same judgement: the subtype relation and the saturation."""
    ty = IUTyper()
    d = ty.derive((), e)
    if subtype_iu(a, b) and a in d:
        assert b in d


@given(st.sampled_from(CORPUS))
def test_simple_typing_implies_iu_typing_at_nat(e):
    # the intersection/union system extends the first-order fragment
    if typecheck_simple(None, e, NAT) and not any(isinstance(s, Abs) for s in subterms(e)):
        assert IUTyper().check((), e, NAT)


def test_arith_universe_has_parity_types():
    assert EVEN in ARITH_UNIVERSE and ODD in ARITH_UNIVERSE
