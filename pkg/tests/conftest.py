import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from bigstep.calculi.lam import Abs, App, Choice, Const, Plus, Succ, Var

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

NAMES = ("x", "y", "z")


def lam_terms(plus: bool = False, choice: bool = True, max_leaves: int = 8):
    """Terms over three variable names; not necessarily closed."""
    leaves = st.one_of(st.sampled_from(NAMES).map(Var), st.integers(0, 3).map(Const))

    def extend(sub):
        opts = [
            st.tuples(st.sampled_from(NAMES), sub).map(lambda p: Abs(p[0], p[1])),
            st.tuples(sub, sub).map(lambda p: App(*p)),
            sub.map(Succ),
        ]
        if choice:
            opts.append(st.tuples(sub, sub).map(lambda p: Choice(*p)))
        if plus:
            opts.append(st.tuples(sub, sub).map(lambda p: Plus(*p)))
        return st.one_of(*opts)

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def closed_lam_terms(**kw):
    from bigstep.calculi.lam import is_closed
    return lam_terms(**kw).filter(is_closed)


@pytest.fixture(scope="session")
def lam_corpus5():
    from bigstep.enumerate import GenSpec, gen_terms
    return gen_terms(GenSpec("lam", 5))


ACCEPTANCE: list[str] = []


@pytest.fixture
def verdict(capsys):
    """Record and print one PASS/FAIL line for an acceptance criterion."""
    def record(n: int, ok: bool, detail: str) -> bool:
        line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE.append(line)
        with capsys.disabled():
            print("\n" + line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
