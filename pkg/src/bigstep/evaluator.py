"""Reference evaluator: exhaustive, depth-bounded proof search for c => r."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .kernel import Concluded, Configuration, Continue, Judgment, ResultValue, RuleState, SemanticsDef, feed


@dataclass(frozen=True)
class CompleteTree:
    config: Configuration
    result: ResultValue
    children: tuple["CompleteTree", ...] = ()
    rule_id: str = ""

    @property
    def judgment(self) -> Judgment:
        return Judgment(self.config, self.result)

    def height(self) -> int:
        return 1 + max((c.height() for c in self.children), default=0)


class Evaluator:
    """Memoized search.  A derivation of height h uses only subderivations of
    height below h; result axioms have height 1."""

    def __init__(self, sem: SemanticsDef):
        self.sem = sem
        self._memo: dict = {}

    def results(self, c: Configuration, depth: int) -> frozenset:
        if self.sem.is_result(c):
            return frozenset([c])
        if depth <= 1:
            return frozenset()
        key = (c, depth)
        got = self._memo.get(key)
        if got is not None:
            return got
        out: set = set()
        for st in self.sem.rules(c):
            self._explore(st, depth - 1, out)
        got = frozenset(out)
        self._memo[key] = got
        return got

    def _explore(self, st: RuleState, d: int, out: set) -> None:
        for r in sorted(self.results(st.premise, d), key=repr):
            nxt = feed(st, r, self.sem.bound)
            if isinstance(nxt, Concluded):
                out.add(nxt.result)
            elif isinstance(nxt, Continue):
                self._explore(nxt.next, d, out)

    def trees(self, c: Configuration, depth: int, result: ResultValue | None = None) -> Iterator[CompleteTree]:
        """All derivations of height <= depth, optionally with a fixed result."""
        if self.sem.is_result(c):
            if result is None or result == c:
                yield CompleteTree(c, c)
            return
        if depth <= 1:
            return
        if result is not None and result not in self.results(c, depth):
            return
        for st in self.sem.rules(c):
            yield from self._trees_from(st, (), depth - 1, result)

    def _trees_from(self, st: RuleState, done: tuple, d: int, result) -> Iterator[CompleteTree]:
        for r in sorted(self.results(st.premise, d), key=repr):
            nxt = feed(st, r, self.sem.bound)
            if isinstance(nxt, Concluded):
                if result is not None and nxt.result != result:
                    continue
                for sub in self.trees(st.premise, d, r):
                    yield CompleteTree(st.config, r, done + (sub,), st.rule_id)
            elif isinstance(nxt, Continue):
                for sub in self.trees(st.premise, d, r):
                    yield from self._trees_from(nxt.next, done + (sub,), d, result)


def eval_all(sem: SemanticsDef, c: Configuration, depth: int) -> frozenset:
    if depth < 1:
        raise ValueError("depth must be positive")
    return Evaluator(sem).results(c, depth)


def prove_one(sem: SemanticsDef, c: Configuration, depth: int, result: ResultValue | None = None) -> CompleteTree | None:
    if depth < 1:
        raise ValueError("depth must be positive")
    return next(Evaluator(sem).trees(c, depth, result), None)


def prove_all(sem: SemanticsDef, c: Configuration, depth: int, limit: int = 1000) -> list[CompleteTree]:
    out = []
    for t in Evaluator(sem).trees(c, depth):
        out.append(t)
        if len(out) >= limit:
            break
    return out


def check_tree(sem: SemanticsDef, t: CompleteTree) -> bool:
    """Replay a tree against the rules: independent validity check."""
    if not t.children:
        return sem.is_result(t.config) and t.result == t.config
    for st in sem.rules(t.config):
        cur = st
        for k, ch in enumerate(t.children):
            if cur.premise != ch.config or not check_tree(sem, ch):
                break
            out = feed(cur, ch.result)
            if isinstance(out, Concluded):
                if k == len(t.children) - 1 and out.result == t.result:
                    return True
                break
            if not isinstance(out, Continue):
                break
            cur = out.next
    return False
