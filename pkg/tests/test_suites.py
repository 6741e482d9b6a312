import pytest

from bigstep.calculi.fj_suites import fj_suite
from bigstep.calculi.lam_suites import lam_suite
from bigstep.soundness import FAIL, PASS, Bounds, run_suite

POSITIVE = [lambda: lam_suite("simple", 4, 30), lambda: lam_suite("union", 4, 30),
            lambda: fj_suite("fjl", exhaustive_size=3, random_count=20),
            lambda: fj_suite("fjo", exhaustive_size=4, random_count=20),
            lambda: fj_suite("fji", exhaustive_size=4, random_count=20)]


@pytest.mark.parametrize("make", POSITIVE, ids=["simple", "union", "fjl", "fjo", "fji"])
def test_positive_small(make):
    s = make()
    rep = run_suite(s, Bounds(), fuel=1000)
    assert rep.configs > 0
    for cond in ("S1", "S2", "S3", "S4"):
        assert rep.status(cond) == PASS, cond
    assert rep.runtime["stuck"] == [] and rep.runtime["wrong"] == []


def test_missing_rule_breaks_progress():
    rep = run_suite(lam_suite("no-succ-simple", 3), Bounds())
    assert rep.status("S2") == FAIL and rep.status("S1") == PASS


def test_fool_rule_breaks_local_preservation():
    rep = run_suite(lam_suite("simple-fool", 3), Bounds())
    assert rep.status("S3") == FAIL
    cx = rep.tallies["S3"].examples[0]
    assert cx.premise == 1


def test_union_elimination_breaks_preservation():
    rep = run_suite(lam_suite("arith-union-orE", 7), Bounds())
    assert rep.status("S1") == FAIL
