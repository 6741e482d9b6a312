"""Cross-checks of the derived evaluators against the reference evaluator.

For every configuration of a corpus this compares four result sets (reference
evaluator, partial evaluation Converged, Wrong-extended Value, last elements
of finite traces), checks that partial evaluation gets stuck exactly when the
Wrong evaluator reports wrong, and optionally checks the structural invariants
of every partial tree reached.
"""
from __future__ import annotations

import multiprocessing
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Callable, Sequence

from . import pev, wrong
from .evaluator import Evaluator
from .kernel import Configuration, SemanticsDef
from .traces import finite_trace

CHECKS = ("pev", "wrong", "traces", "stuck-wrong", "invariants")


@dataclass(frozen=True)
class Disagreement:
    check: str
    config: Configuration
    detail: str


@dataclass
class XReport:
    name: str
    bounds: dict
    configs: int = 0
    disagreements: list[Disagreement] = field(default_factory=list)
    counts: dict = field(default_factory=lambda: {"converged": 0, "stuck": 0, "wrong": 0, "exhausted": 0})

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def tally(self) -> dict:
        out = {k: 0 for k in CHECKS}
        for d in self.disagreements:
            out[d.check] += 1
        return out

    def to_json(self, show: Callable[[Any], str] = repr, timestamp: bool = True, limit: int = 50) -> dict:
        return {
            "suite": self.name,
            "bounds": self.bounds,
            "configurations": self.configs,
            "status": "Pass" if self.ok else "Fail",
            "disagreements": self.tally(),
            "examples": [{"check": d.check, "config": show(d.config), "detail": d.detail}
                         for d in self.disagreements[:limit]],
            "runtime": dict(self.counts),
            "generated_at": datetime.now(timezone.utc).isoformat() if timestamp else None,
        }


def _show_set(xs, show) -> str:
    return "{" + ", ".join(sorted(show(x) for x in xs)) + "}"


def xcheck_config(sem: SemanticsDef, c: Configuration, depth: int, fuel: int, budget: int = 256,
                  invariants: bool = True, tree_limit: int = 64) -> tuple[list[Disagreement], dict]:
    """Disagreements for one configuration, plus its outcome counts."""
    show = sem.show
    out: list[Disagreement] = []
    ev = Evaluator(sem)
    std = ev.results(c, depth)

    bad: list[str] = []

    def edge(before, after):
        if len(bad) >= 3:
            return
        if not pev.tree_lt(before, after):
            bad.append("a step does not strictly increase the tree order")
        bad.extend(pev.invariant_violations(after))
        if after.known and not pev.is_complete(after):
            bad.append("root has a result but the tree is incomplete")

    runs = pev.run_all(sem, c, fuel, budget, on_edge=edge if invariants else None)
    conv = frozenset(o.result for o in runs if isinstance(o, pev.Converged))
    stuck = any(isinstance(o, pev.Stuck) for o in runs)
    if conv != std:
        out.append(Disagreement("pev", c, f"evaluator {_show_set(std, show)}, pev {_show_set(conv, show)}"))
    for msg in bad[:3]:
        out.append(Disagreement("invariants", c, msg))

    wouts = wrong.eval_wrong(sem, c, fuel, pev.All(budget))
    vals = frozenset(o.result for o in wouts if isinstance(o, wrong.Value))
    is_wrong = any(isinstance(o, wrong.Wrong) for o in wouts)
    if vals != std:
        out.append(Disagreement("wrong", c, f"evaluator {_show_set(std, show)}, wrong {_show_set(vals, show)}"))
    if stuck != is_wrong:
        out.append(Disagreement("stuck-wrong", c, f"pev stuck: {stuck}, wrong reported: {is_wrong}"))

    lasts = set()
    for n, t in enumerate(ev.trees(c, depth)):
        if n >= tree_limit:
            break
        lasts.add(finite_trace(t)[-1])
    for o in runs:
        if isinstance(o, pev.Converged):
            lasts.add(finite_trace(o.tree)[-1])
    if lasts != std:
        out.append(Disagreement("traces", c, f"evaluator {_show_set(std, show)}, traces {_show_set(lasts, show)}"))

    counts = {"converged": int(bool(conv)), "stuck": int(stuck), "wrong": int(is_wrong),
              "exhausted": int(any(isinstance(o, pev.Exhausted) for o in runs))}
    return out, counts


_JOB: tuple = ()


def _work(c):
    sem, kw = _JOB
    return xcheck_config(sem, c, **kw)


def xcheck(sem: SemanticsDef, corpus: Sequence[Configuration], depth: int = 50, fuel: int = 500,
           budget: int = 256, invariants: bool = True, workers: int = 1, name: str | None = None) -> XReport:
    global _JOB
    rep = XReport(name or sem.name, {"depth": depth, "fuel": fuel, "strategy": "all", "branch_budget": budget})
    kw = dict(depth=depth, fuel=fuel, budget=budget, invariants=invariants)
    if workers > 1 and "fork" in multiprocessing.get_all_start_methods():
        # semantics hold closures, so workers inherit them by forking
        _JOB = (sem, kw)
        with multiprocessing.get_context("fork").Pool(workers) as p:
            results = p.map(_work, corpus, chunksize=64)
        _JOB = ()
    else:
        results = [xcheck_config(sem, c, **kw) for c in corpus]
    for ds, counts in results:
        rep.configs += 1
        rep.disagreements.extend(ds)
        for k, v in counts.items():
            rep.counts[k] += v
    return rep
