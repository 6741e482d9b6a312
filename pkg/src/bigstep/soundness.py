"""Checkers for the per-rule soundness conditions and suite orchestration.

For an indexed predicate P (typically "has type i"):

  S1 local preservation  for a rule with conclusion in P_i there are indexes
                         i_1 .. i_{n+1} = i such that, whenever the results of
                         the premises before k are in their predicates, the
                         configuration of premise k is in P_{i_k}
  S2 exists-progress     a configuration in P is the conclusion of some rule
  S3 forall-progress     if premises before k are derivable and C(j_k) => r,
                         some rule agreeing up to premise k accepts r
  S4 progress-may        some rule has all premises derivable, or its first
                         underivable premise does not converge
"""
from __future__ import annotations

import datetime
import json
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from .evaluator import Evaluator
from .kernel import Concluded, Configuration, Continue, Judgment, RuleInstance, RuleState, SemanticsDef, bundle_at, feed
from .pev import All, Converged, Stuck
from .pev import Exhausted as PevExhausted
from .pev import run as pev_run
from .wrong import Wrong, eval_wrong

PASS, FAIL, INCONCLUSIVE = "Pass", "Fail", "Inconclusive"
CONDITIONS = ("S1", "S2", "S3", "S4", "preservation")


@dataclass(frozen=True)
class IndexedPredicate:
    name: str
    holds: Callable[[Any, Configuration], bool]
    index_universe: Callable[[Configuration], Sequence[Any]]
    s1_oracle: Callable[[RuleInstance, Any], Sequence[Any] | None] | None = None
    show_index: Callable[[Any], str] = str
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class Bounds:
    eval_depth: int = 32
    result_pool_size: int = 6
    instance_count: int = 48
    random_seed: int = 0

    def __post_init__(self):
        for k, v in self.__dict__.items():
            if v < 0 or (v == 0 and k != "random_seed"):
                raise ValueError(f"{k} must be positive")


@dataclass(frozen=True)
class Counterexample:
    subject: Any  # RuleInstance or configuration
    index: Any = None
    premise: int | None = None
    result: Any = None
    explanation: str = ""


@dataclass(frozen=True)
class CheckResult:
    status: str
    counterexample: Counterexample | None = None
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.status == PASS


def _pass(note: str = "") -> CheckResult:
    return CheckResult(PASS, None, note)


def _fail(cx: Counterexample, note: str = "") -> CheckResult:
    return CheckResult(FAIL, cx, note)


# -- S1 -------------------------------------------------------------------------------

def _chain(P: IndexedPredicate, inst: RuleInstance, idx: Sequence[Any]) -> int | None:
    """First premise position where the guarded chain breaks, or None."""
    for k, (j, i) in enumerate(zip(inst.premises, idx), 1):
        if not P.holds(i, j.config):
            return k
        if not P.holds(i, j.result):
            return None  # later premises are vacuous
    return None


def _search(P: IndexedPredicate, inst: RuleInstance, iota) -> tuple[int | None, list]:
    """Index search over the universe.  Once a premise result can be placed
    outside the predicate of a valid index, the remaining implications hold
    vacuously; otherwise any valid index keeps the guard and the choice does
    not matter."""
    chosen: list = []
    n = len(inst.premises)
    for k, j in enumerate(inst.premises, 1):
        if k == n:
            if not P.holds(iota, j.config):
                return k, chosen
            chosen.append(iota)
            return None, chosen
        cands = [i for i in P.index_universe(j.config) if P.holds(i, j.config)]
        if not cands:
            return k, chosen
        escape = [i for i in cands if not P.holds(i, j.result)]
        if escape:
            chosen.append(escape[0])
            return None, chosen + [iota] * (n - k)
        chosen.append(cands[0])
    return None, chosen


def check_local_preservation(sem: SemanticsDef, P: IndexedPredicate, inst: RuleInstance, iota, b: Bounds | None = None) -> CheckResult:
    if not P.holds(iota, inst.config):
        return _pass("conclusion not in predicate")
    bad, _ = _search(P, inst, iota)
    note = ""
    if P.s1_oracle is not None:
        idx = P.s1_oracle(inst, iota)
        if idx is not None:
            idx = list(idx)
            if len(idx) != len(inst.premises) or idx[-1] != iota:
                raise ValueError("s1_oracle must return one index per premise ending with the conclusion index")
            obad = _chain(P, inst, idx)
            if (obad is None) != (bad is None):
                note = f"oracle-search disagreement: oracle {'pass' if obad is None else 'fail'}, search {'pass' if bad is None else 'fail'}"
            if obad is None:
                return _pass(note)
    if bad is None:
        return _pass(note)
    j = inst.premises[bad - 1]
    what = "continuation" if bad == len(inst.premises) else "premise"
    return _fail(Counterexample(inst, iota, bad, j.result,
                                f"no index for the {what} configuration at position {bad}"), note)


# -- S2 / S3 / S4 -------------------------------------------------------------------------

def check_exists_progress(sem: SemanticsDef, P: IndexedPredicate, c: Configuration) -> CheckResult:
    if sem.is_result(c):
        return _pass("result")
    if sem.rules(c):
        return _pass()
    return _fail(Counterexample(c, None, None, None, "no rule has this conclusion"))


def check_forall_progress(sem: SemanticsDef, P: IndexedPredicate, inst: RuleInstance, b: Bounds | None = None,
                          ev: Evaluator | None = None) -> CheckResult:
    b = b or Bounds()
    ev = ev or Evaluator(sem)
    for k, j in enumerate(inst.premises, 1):
        prefix = inst.premises[: k - 1]
        if k > 1:
            h = prefix[-1]
            if h.result not in ev.results(h.config, b.eval_depth):
                return _pass(f"premise {k - 1} not derivable; later positions vacuous")
        bundle = bundle_at(sem, inst.config, prefix, j.config)
        for r in sorted(ev.results(j.config, b.eval_depth), key=repr):
            if all(not isinstance(feed(st, r), (Concluded, Continue)) for st in bundle):
                return _fail(Counterexample(inst, None, k, r, f"every rule agreeing up to premise {k} rejects the derivable result"))
    return _pass()


def check_progress_may(sem: SemanticsDef, P: IndexedPredicate, c: Configuration, b: Bounds | None = None,
                       ev: Evaluator | None = None) -> CheckResult:
    b = b or Bounds()
    ev = ev or Evaluator(sem)
    if sem.is_result(c):
        return _pass("result")

    def walk(st: RuleState) -> str | None:
        rs = ev.results(st.premise, b.eval_depth)
        if not rs:
            return f"premise {st.index} does not converge within depth {b.eval_depth}"
        for r in sorted(rs, key=repr):
            out = feed(st, r)
            if isinstance(out, Concluded):
                return "all premises derivable"
            if isinstance(out, Continue):
                why = walk(out.next)
                if why:
                    return why
        return None

    for st in sem.rules(c):
        why = walk(st)
        if why:
            return _pass(why)
    return _fail(Counterexample(c, None, None, None, "every rule stops at a converging premise whose results it rejects"))


def check_preservation_global(sem: SemanticsDef, P: IndexedPredicate, c: Configuration, iota, depth: int,
                              ev: Evaluator | None = None) -> CheckResult:
    ev = ev or Evaluator(sem)
    for r in sorted(ev.results(c, depth), key=repr):
        if not P.holds(iota, r):
            return _fail(Counterexample(c, iota, None, r, "derivable result outside the predicate"))
    return _pass()


# -- rule instances --------------------------------------------------------------------------

def rule_instances(sem: SemanticsDef, c: Configuration, ev: Evaluator, pool: Callable[[Configuration], Sequence],
                   b: Bounds) -> list[RuleInstance]:
    """Instances of the rules with conclusion c: derivable results first, then pool results."""
    out: list[RuleInstance] = []

    def cands(p):
        seen = sorted(ev.results(p, b.eval_depth), key=repr)
        for r in pool(p)[: b.result_pool_size]:
            if r not in seen:
                seen.append(r)
        return seen

    def go(st: RuleState):
        for r in cands(st.premise):
            if len(out) >= b.instance_count:
                return
            res = feed(st, r)
            if isinstance(res, Concluded):
                out.append(RuleInstance(c, st.fed + (Judgment(st.premise, r),), st.rule_id))
            elif isinstance(res, Continue):
                go(res.next)

    for st in sem.rules(c):
        go(st)
    return out


# -- suites ------------------------------------------------------------------------------------

@dataclass
class Suite:
    name: str
    sem: SemanticsDef
    predicate: IndexedPredicate
    corpus: Callable[[], Iterable[tuple[Configuration, Any]]]
    pool: Callable[[Configuration], Sequence] = lambda c: ()
    subconfigs: Callable[[Configuration], Sequence[Configuration]] = lambda c: ()
    size: Callable[[Configuration], int] = lambda c: 0
    max_indexes: int = 3


@dataclass
class Tally:
    passed: int = 0
    failed: int = 0
    inconclusive: int = 0
    examples: list = field(default_factory=list)
    notes: set = field(default_factory=set)

    def add(self, r: CheckResult, keep: int = 3) -> None:
        if r.status == PASS:
            self.passed += 1
        elif r.status == FAIL:
            self.failed += 1
            if len(self.examples) < keep:
                self.examples.append(r.counterexample)
        else:
            self.inconclusive += 1
        if r.note and "disagreement" in r.note:
            self.notes.add(r.note)

    @property
    def status(self) -> str:
        if self.failed:
            return FAIL
        if self.inconclusive:
            return INCONCLUSIVE
        return PASS

    @property
    def total(self) -> int:
        return self.passed + self.failed + self.inconclusive


@dataclass
class Report:
    suite: str
    predicate: str
    bounds: Bounds
    configs: int = 0
    tallies: dict = field(default_factory=dict)
    runtime: dict = field(default_factory=dict)
    flags: tuple = ()

    def status(self, cond: str) -> str:
        return self.tallies[cond].status

    @property
    def ok(self) -> bool:
        return all(t.failed == 0 for t in self.tallies.values()) and not self.runtime.get("stuck") and not self.runtime.get("wrong")

    def to_json(self, show: Callable, show_index: Callable = str, timestamp: bool = True) -> dict:
        def cx(c: Counterexample) -> dict:
            subj = c.subject
            if isinstance(subj, RuleInstance):
                s = {"rule": subj.rule_id, "config": show(subj.config),
                     "premises": [[show(j.config), show(j.result)] for j in subj.premises]}
            else:
                s = {"config": show(subj)}
            return {**s, "index": None if c.index is None else show_index(c.index), "premise": c.premise,
                    "result": None if c.result is None else show(c.result), "explanation": c.explanation}

        conds = []
        for name in CONDITIONS:
            if name not in self.tallies:
                continue
            t = self.tallies[name]
            conds.append({"condition": name, "status": t.status,
                          "tally": {"pass": t.passed, "fail": t.failed, "inconclusive": t.inconclusive},
                          "counterexamples": [cx(c) for c in t.examples],
                          "notes": sorted(t.notes)})
        out = {"suite": self.suite, "predicate": self.predicate,
               "bounds": {k: getattr(self.bounds, k) for k in ("eval_depth", "result_pool_size", "instance_count", "random_seed")},
               "configurations": self.configs, "conditions": conds, "flags": list(self.flags)}
        if self.runtime:
            out["runtime"] = {k: (v if isinstance(v, int) else [show(c) for c in v]) for k, v in sorted(self.runtime.items())}
        if timestamp:
            out["generated_at"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
        return out


def minimize(c: Configuration, failing: Callable[[Configuration], bool], subconfigs: Callable, size: Callable) -> Configuration:
    """Smallest subconfiguration (by size, then text) that still fails."""
    best = c
    for s in sorted(subconfigs(c), key=lambda x: (size(x), repr(x))):
        if size(s) >= size(best):
            break
        if s != c and failing(s):
            return minimize(s, failing, subconfigs, size)
    return best


def check_config(suite: Suite, c: Configuration, iotas: Sequence, b: Bounds, ev: Evaluator) -> dict[str, list[CheckResult]]:
    sem, P = suite.sem, suite.predicate
    out: dict[str, list[CheckResult]] = {k: [] for k in CONDITIONS}
    if not sem.is_result(c):
        out["S2"].append(check_exists_progress(sem, P, c))
        out["S4"].append(check_progress_may(sem, P, c, b, ev))
        insts = rule_instances(sem, c, ev, suite.pool, b)
        for inst in insts:
            for iota in iotas:
                out["S1"].append(check_local_preservation(sem, P, inst, iota, b))
            out["S3"].append(check_forall_progress(sem, P, inst, b, ev))
    for iota in iotas:
        out["preservation"].append(check_preservation_global(sem, P, c, iota, b.eval_depth, ev))
    return out


def run_suite(suite: Suite, b: Bounds | None = None, fuel: int | None = None, branch_budget: int = 32,
              minimize_failures: bool = True) -> Report:
    """Check every (configuration, index) of the corpus; optionally run PEV and
    the wrong evaluator on each configuration with the given fuel."""
    b = b or Bounds()
    sem, P = suite.sem, suite.predicate
    ev = Evaluator(sem)
    rep = Report(suite.name, P.name, b, flags=P.flags)
    rep.tallies = {k: Tally() for k in CONDITIONS}
    by_config: dict = {}
    for c, iota in suite.corpus():
        by_config.setdefault(c, []).append(iota)
    if fuel is not None:
        rep.runtime = {"stuck": [], "wrong": [], "converged": 0, "exhausted": 0}
    for c in sorted(by_config, key=lambda x: (suite.size(x), repr(x))):
        iotas = by_config[c][: suite.max_indexes]
        rep.configs += 1
        results = check_config(suite, c, iotas, b, ev)
        for cond, rs in results.items():
            for r in rs:
                if r.status == FAIL and minimize_failures and suite.subconfigs(c):
                    r = _minimized(suite, cond, r, b, ev)
                rep.tallies[cond].add(r)
        if fuel is not None:
            _runtime(suite, c, fuel, branch_budget, rep.runtime)
    return rep


def _runtime(suite: Suite, c, fuel: int, budget: int, acc: dict) -> None:
    outs = pev_run(suite.sem, c, fuel, All(budget))
    if any(isinstance(o, Stuck) for o in outs):
        acc["stuck"].append(c)
    if any(isinstance(o, Converged) for o in outs):
        acc["converged"] += 1
    if any(isinstance(o, PevExhausted) for o in outs):
        acc["exhausted"] += 1
    if any(isinstance(o, Wrong) for o in eval_wrong(suite.sem, c, fuel, All(budget))):
        acc["wrong"].append(c)


def _minimized(suite: Suite, cond: str, r: CheckResult, b: Bounds, ev: Evaluator) -> CheckResult:
    """Replace a failing check by the same failure on the smallest failing subconfiguration."""
    P = suite.predicate
    subj = r.counterexample.subject
    c = subj.config if isinstance(subj, RuleInstance) else subj
    found: dict = {}

    def failing(s) -> bool:
        iotas = [i for i in P.index_universe(s) if P.holds(i, s)][: suite.max_indexes]
        if not iotas:
            return False
        rs = check_config(suite, s, iotas, b, ev)[cond]
        bad = [x for x in rs if x.status == FAIL]
        if bad:
            found[s] = bad[0]
            return True
        return False

    m = minimize(c, failing, suite.subconfigs, suite.size)
    return found.get(m, r)


def report_json_text(rep: Report, show: Callable, show_index: Callable = str, timestamp: bool = True) -> str:
    return json.dumps(rep.to_json(show, show_index, timestamp), indent=2, sort_keys=True)
