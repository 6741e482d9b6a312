import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bigstep.calculi.lam import is_closed, size
from bigstep.calculi.lam_suites import simple_predicate
from bigstep.enumerate import (Exhaustive, GenSpec, LamShape, Random, canonical_order, gen_terms, gen_welltyped,
                               generator, lam_exhaustive, lam_random)


def test_exhaustive_counts_are_stable():
    assert [len(gen_terms(GenSpec("lam", n))) for n in (1, 2, 3)] == [2, 5, 21]
    assert len(gen_terms(GenSpec("lam", 7))) == 25530


def test_exhaustive_terms_are_closed_distinct_and_sized():
    ts = gen_terms(GenSpec("lam", 5))
    assert len(ts) == len(set(ts))
    assert all(is_closed(t) and 1 <= size(t) <= 5 for t in ts)
    assert gen_terms(GenSpec("lam", 5, min_size=5)) == [t for t in ts if size(t) == 5]


def test_exhaustive_is_complete_at_small_size():
    # by hand: 0, 1, succ 0, succ 1, fun x . x
    assert {str(t) for t in gen_terms(GenSpec("lam", 2))} == {str(t) for t in lam_exhaustive(LamShape(), 1, 2)}
    assert len(gen_terms(GenSpec("lam", 2))) == 5


def test_arith_shape():
    ts = gen_terms(GenSpec("lam-arith", 3))
    from bigstep.calculi.lam import Abs, Const
    assert all(not isinstance(t, Abs) for t in ts)
    assert {t.n for t in ts if isinstance(t, Const)} == {1, 2}


@given(st.integers(0, 10 ** 6), st.integers(1, 15))
def test_random_terms_are_closed_and_bounded(seed, n):
    t = lam_random(LamShape(), random.Random(seed), n)
    assert is_closed(t) and size(t) <= n


def test_random_is_seeded():
    a = gen_terms(GenSpec("lam", 10, Random(20, seed=3)))
    b = gen_terms(GenSpec("lam", 10, Random(20, seed=3)))
    c = gen_terms(GenSpec("lam", 10, Random(20, seed=4)))
    assert a == b and a != c


def test_welltyped_filter():
    P = simple_predicate()
    pairs = gen_welltyped(GenSpec("lam", 4), P)
    assert pairs and all(P.holds(i, c) for c, i in pairs)
    rnd = gen_welltyped(GenSpec("lam", 8, Random(15, 1)), P)
    assert len({c for c, _ in rnd}) == 15


def test_errors():
    with pytest.raises(ValueError):
        gen_terms(GenSpec("lam", 0))
    with pytest.raises(ValueError):
        generator("cobol")


def test_canonical_order():
    ts = gen_terms(GenSpec("lam", 3))
    out = canonical_order(list(reversed(ts)), size, str)
    assert [size(t) for t in out] == sorted(size(t) for t in ts)


def test_fj_generators_register_lazily():
    g = generator("fjo")
    assert gen_terms(GenSpec("fjo", 2), gen=g)
