"""Evaluation extended with an explicit wrong result.

wrong is produced when a configuration is the conclusion of no rule, when a
premise result is refused by every rule agreeing with the current one up to
that premise, and it propagates through the premise that produced it.  The
evaluator is inductive and fuel-bounded; it counts steps exactly as the
partial evaluator does, so the two can be compared run by run.
"""
from __future__ import annotations

import random
import sys
from dataclasses import dataclass

from ._deep import deep
from .kernel import Concluded, Configuration, Continue, ResultValue, SemanticsDef, feed, group_by_premise
from .pev import All, First, Random, Strategy


@dataclass(frozen=True)
class NoRule:
    config: Configuration


@dataclass(frozen=True)
class AllReject:
    config: Configuration
    index: int
    result: ResultValue


@dataclass(frozen=True)
class Propagated:
    config: Configuration
    child: Configuration
    index: int
    cause: "Evidence"


Evidence = NoRule | AllReject | Propagated


@dataclass(frozen=True)
class Value:
    result: ResultValue


@dataclass(frozen=True)
class Wrong:
    evidence: Evidence

    @property
    def root_cause(self) -> Evidence:
        ev = self.evidence
        while isinstance(ev, Propagated):
            ev = ev.cause
        return ev


@dataclass(frozen=True)
class Exhausted:
    pass


WrongOutcome = Value | Wrong | Exhausted
EXHAUSTED = Exhausted()


class _Run:
    def __init__(self, sem: SemanticsDef, s: Strategy):
        self.sem = sem
        self.s = s
        self.rng = random.Random(s.seed) if isinstance(s, Random) else None
        self.budget = s.budget if isinstance(s, All) else 1

    def pick(self, options: list) -> list:
        if isinstance(self.s, All):
            return options
        if isinstance(self.s, Random) and len(options) > 1:
            return [options[self.rng.randrange(len(options))]]
        return options[:1]

    def ev(self, c: Configuration, fuel: int) -> list[tuple[WrongOutcome, int]]:
        sem = self.sem
        if sem.is_result(c):
            if fuel < 1:
                return [(EXHAUSTED, fuel)]
            return [(Value(c), fuel - 1)]
        groups = group_by_premise(sem.rules(c))
        if not groups:
            return [(Wrong(NoRule(c)), fuel)]
        if fuel < 1:
            return [(EXHAUSTED, fuel)]
        out: list = []
        for premise, bundle in self.pick(groups):
            out += self.rule(c, bundle, premise, 1, fuel - 1)
            if len(out) >= self.budget:
                break
        return out[: self.budget]

    def rule(self, c, bundle, premise, i: int, fuel: int) -> list:
        out: list = []
        for o, f in self.ev(premise, fuel):
            if isinstance(o, Wrong):
                out.append((Wrong(Propagated(c, premise, i, o.evidence)), f))
                continue
            if isinstance(o, Exhausted):
                out.append((o, f))
                continue
            r = o.result
            concluded = False
            cont = []
            for st in bundle:
                res = feed(st, r)
                if isinstance(res, Concluded):
                    concluded = True
                elif isinstance(res, Continue):
                    cont.append(res.next)
            options = ([None] if concluded else []) + group_by_premise(cont)
            if not options:
                out.append((Wrong(AllReject(c, i, r)), f))
                continue
            if f < 1:
                out.append((EXHAUSTED, f))
                continue
            for opt in self.pick(options):
                if opt is None:
                    out.append((Value(r), f - 1))
                else:
                    out += self.rule(c, opt[1], opt[0], i + 1, f - 1)
                if len(out) >= self.budget:
                    break
            if len(out) >= self.budget:
                break
        return out[: self.budget]


def eval_wrong(sem: SemanticsDef, c: Configuration, fuel: int, s: Strategy = First()):
    """One WrongOutcome, or the list of outcomes of every choice path under All."""
    if fuel < 1:
        raise ValueError("fuel must be positive")
    runner = _Run(sem, s)
    if fuel > 600:
        outs = deep(runner.ev, c, fuel)
    else:
        # at most a handful of frames per step
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, 5000))
        try:
            outs = runner.ev(c, fuel)
        finally:
            sys.setrecursionlimit(old)
    if isinstance(s, All):
        return [o for o, _ in outs]
    return outs[0][0]
