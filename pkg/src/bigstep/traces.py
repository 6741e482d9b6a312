"""Traces: the sequence of configurations visited by a derivation.

A node with children contributes its configuration followed by the traces of
its premises in order; a result axiom contributes the result alone.  Finite
traces come from complete trees, prefixes from partial ones, and eventually
periodic infinite traces from divergence witnesses.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from .evaluator import CompleteTree, Evaluator
from .kernel import Concluded, Configuration, Continue, RuleState, SemanticsDef, feed
from .pev import PartialTree

Trace = tuple


def finite_trace(tree: CompleteTree | PartialTree) -> Trace:
    out: list = []
    # explicit stack: trees produced by long runs can be deep
    todo: list = [tree]
    while todo:
        t = todo.pop()
        out.append(t.config)
        todo.extend(reversed(t.children))
    return tuple(out)


def trace_prefix(t: PartialTree) -> Trace:
    """Configurations visited so far; equal to finite_trace on complete trees."""
    return finite_trace(t)


@dataclass(frozen=True)
class PeriodicTrace:
    prefix: Trace
    cycle: Trace

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("cycle must be nonempty")

    def unroll(self, n: int) -> Trace:
        """First n configurations."""
        out = list(self.prefix[:n])
        while len(out) < n:
            out.extend(self.cycle)
        return tuple(out[:n])


@dataclass(frozen=True)
class Choice:
    rule_id: str
    index: int


@dataclass(frozen=True)
class DivergenceWitness:
    members: tuple[Configuration, ...]
    choice: tuple[tuple[Configuration, Choice], ...]

    @staticmethod
    def of(mapping: dict) -> "DivergenceWitness":
        items = tuple(mapping.items())
        return DivergenceWitness(tuple(c for c, _ in items), items)

    def choice_for(self, c: Configuration) -> Choice:
        for m, ch in self.choice:
            if m == c:
                return ch
        raise KeyError(c)


@dataclass(frozen=True)
class Valid:
    traces: tuple[tuple[Configuration, PeriodicTrace], ...]

    def trace_of(self, c: Configuration) -> PeriodicTrace:
        return dict(self.traces)[c]


@dataclass(frozen=True)
class Invalid:
    reason: str
    depth_limited: bool = False


def _segment(sem: SemanticsDef, ev: Evaluator, c: Configuration, ch: Choice, members: set, depth: int,
             show: Callable) -> tuple[Trace, Configuration] | Invalid:
    """Trace segment c . t_1 ... t_{k-1} and the k-th premise configuration."""
    states = [st for st in sem.rules(c) if st.rule_id == ch.rule_id]
    if not states:
        return Invalid(f"{show(c)} has no rule {ch.rule_id}")
    if ch.index < 1 or ch.index > sem.bound:
        return Invalid(f"index {ch.index} out of range for {show(c)}")
    st = states[0]
    limited = False
    misses: list[str] = []

    # search over derivable results for the premises before k
    def go(st: RuleState, seg: tuple) -> tuple[Trace, Configuration] | None:
        nonlocal limited
        if st.index == ch.index:
            if st.premise in members:
                return seg, st.premise
            misses.append(f"premise-{ch.index} configuration {show(st.premise)} is not a member")
            return None
        rs = ev.results(st.premise, depth)
        if not rs and not sem.is_result(st.premise):
            limited = True
        for r in sorted(rs, key=repr):
            out = feed(st, r)
            if isinstance(out, Continue):
                tree = next(ev.trees(st.premise, depth, r))
                got = go(out.next, seg + finite_trace(tree))
                if got is not None:
                    return got
            elif isinstance(out, Concluded):
                misses.append(f"rule {ch.rule_id} of {show(c)} concludes before premise {ch.index}")
        return None

    got = go(st, (c,))
    if got is not None:
        return got
    if misses:
        return Invalid(misses[0])
    return Invalid(f"premises of {show(c)} before {ch.index} are not derivable within depth {depth}", limited)


def verify_divergence_witness(sem: SemanticsDef, w: DivergenceWitness, depth: int) -> Valid | Invalid:
    if not w.members:
        return Invalid("empty witness")
    ev = Evaluator(sem)
    members = set(w.members)
    seg: dict = {}
    for c in w.members:
        if sem.is_result(c):
            return Invalid(f"member {sem.show(c)} is a result")
        got = _segment(sem, ev, c, w.choice_for(c), members, depth, sem.show)
        if isinstance(got, Invalid):
            return got
        seg[c] = got
    # solve X_c = seg_c . X_next(c): follow the successor map until it repeats
    traces = []
    for c in w.members:
        order: list = []
        cur = c
        while cur not in order:
            order.append(cur)
            cur = seg[cur][1]
        j = order.index(cur)
        prefix = sum((seg[m][0] for m in order[:j]), ())
        cycle = sum((seg[m][0] for m in order[j:]), ())
        traces.append((c, PeriodicTrace(prefix, cycle)))
    return Valid(tuple(traces))


# -- witness files -------------------------------------------------------------------

def witness_from_json(data: dict | str, parse: Callable[[str], Any]) -> DivergenceWitness:
    """{"members": [{"config": "...", "rule": "app", "index": 3}, ...]}"""
    if isinstance(data, str):
        data = json.loads(data)
    try:
        items = {}
        for m in data["members"]:
            items[parse(m["config"])] = Choice(str(m["rule"]), int(m["index"]))
    except (KeyError, TypeError) as e:
        raise ValueError(f"malformed witness: {e}") from None
    return DivergenceWitness.of(items)


def periodic_to_json(p: PeriodicTrace, show: Callable) -> dict:
    return {"prefix": [show(c) for c in p.prefix], "cycle": [show(c) for c in p.cycle]}


def is_prefix_of_unrolling(prefix: Sequence, p: PeriodicTrace) -> bool:
    return tuple(prefix) == p.unroll(len(prefix))
