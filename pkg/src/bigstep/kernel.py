"""Language-independent big-step rules.

A semantics is a result test plus, for each configuration, a finite list of
rule schedulers.  A scheduler consumes a rule's premises left to right: it
names the configuration of the next premise as a function of the results fed
so far, and decides when the last fed premise was the continuation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

Configuration = Any
ResultValue = Any


class _Signal:
    def __init__(self, name: str):
        self.name = name

    def __repr__(self) -> str:
        return self.name


# what a schedule function may return instead of a next premise configuration
CONCLUDE = _Signal("CONCLUDE")
REJECT = _Signal("REJECT")

Schedule = Callable[[tuple], Any]


@dataclass(frozen=True)
class Judgment:
    config: Configuration
    result: ResultValue


@dataclass(frozen=True)
class RuleState:
    """One rule partially consumed.

    `schedule` receives the tuple of all results fed so far (including the
    newest one) and answers the next premise configuration, CONCLUDE or REJECT.
    It is excluded from equality: two states are equal when they agree on the
    rule, the conclusion, the realized premises and the pending premise.
    """

    rule_id: str
    config: Configuration
    premise: Configuration
    fed: tuple[Judgment, ...] = ()
    schedule: Schedule = field(default=None, compare=False, repr=False)

    @property
    def index(self) -> int:
        # 1-based position of the pending premise
        return len(self.fed) + 1


class Rejected:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "Rejected"


REJECTED = Rejected()


@dataclass(frozen=True)
class Continue:
    next: RuleState


@dataclass(frozen=True)
class Concluded:
    result: ResultValue


FeedOutcome = Rejected | Continue | Concluded


@dataclass(frozen=True)
class RuleInstance:
    config: Configuration
    premises: tuple[Judgment, ...]
    rule_id: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.premises:
            raise ValueError("a rule has at least its continuation premise")

    @property
    def result(self) -> ResultValue:
        return self.premises[-1].result

    def __len__(self) -> int:
        return len(self.premises)


@dataclass(frozen=True)
class SemanticsDef:
    name: str
    is_result: Callable[[Configuration], bool]
    open_rules: Callable[[Configuration], Sequence[RuleState]]
    bound: int
    show: Callable[[Configuration], str] = repr
    # hint used by enumerate/cli to pick parsers and printers
    calculus: str = ""

    def rules(self, c: Configuration) -> list[RuleState]:
        if self.is_result(c):
            return []
        return list(self.open_rules(c))


class BoundViolation(RuntimeError):
    pass


def start(rule_id: str, config: Configuration, first: Configuration, schedule: Schedule) -> RuleState:
    return RuleState(rule_id, config, first, (), schedule)


def feed(state: RuleState, r: ResultValue, bound: int | None = None) -> FeedOutcome:
    fed = state.fed + (Judgment(state.premise, r),)
    nxt = state.schedule(tuple(j.result for j in fed))
    if nxt is REJECT:
        return REJECTED
    if nxt is CONCLUDE:
        return Concluded(r)
    if bound is not None and len(fed) >= bound:
        raise BoundViolation(f"{state.rule_id} exceeds {bound} premises")
    return Continue(RuleState(state.rule_id, state.config, nxt, fed, state.schedule))


def sim_upto(a: RuleInstance, b: RuleInstance, i: int) -> bool:
    """a ~_i b: same conclusion, same first i-1 premises, same i-th premise configuration."""
    if i < 1 or i > len(a.premises) or i > len(b.premises):
        raise IndexError(f"premise index {i} out of range")
    return (
        a.config == b.config
        and a.premises[: i - 1] == b.premises[: i - 1]
        and a.premises[i - 1].config == b.premises[i - 1].config
    )


def replay(sem: SemanticsDef, inst: RuleInstance) -> list[RuleState]:
    """Initial states of open_rules(inst.config) that reproduce inst exactly."""
    found = []
    for st in sem.rules(inst.config):
        cur: RuleState | None = st
        ok = False
        for k, j in enumerate(inst.premises):
            if cur is None or cur.premise != j.config:
                break
            out = feed(cur, j.result)
            last = k == len(inst.premises) - 1
            if isinstance(out, Concluded):
                ok = last
                break
            if isinstance(out, Continue) and not last:
                cur = out.next
                continue
            break
        if ok:
            found.append(st)
    return found


def bundle_at(sem: SemanticsDef, c: Configuration, prefix: Sequence[Judgment], premise: Configuration) -> list[RuleState]:
    """States realizing the ~_k class fixed by (c, prefix, premise), k = len(prefix)+1."""
    out = []
    for st in sem.rules(c):
        cur = st
        for j in prefix:
            if cur.premise != j.config:
                cur = None
                break
            nxt = feed(cur, j.result)
            cur = nxt.next if isinstance(nxt, Continue) else None
            if cur is None:
                break
        if cur is not None and cur.premise == premise:
            out.append(cur)
    return out


def group_by_premise(states: Sequence[RuleState]) -> list[tuple[Configuration, tuple[RuleState, ...]]]:
    """Partition states by pending premise configuration, keeping first-seen order."""
    groups: dict = {}
    for st in states:
        groups.setdefault(st.premise, []).append(st)
    return [(p, tuple(sts)) for p, sts in groups.items()]
