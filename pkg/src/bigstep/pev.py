"""Partial evaluation: reduction of finite proof trees with unknown results.

A tree node is c => ? or c => r.  One step acts on the deepest node whose
result is unknown (all its children are then complete):

  result-axiom   r => ?                becomes r => r
  open           c => ?, no children   gets the first premise of some rule
  conclude       last child c' => r    fed to the bundle, a rule concludes: c => r
  open-next      last child c' => r    fed to the bundle, a rule continues with a new premise

The bundle is the set of rule states agreeing on the conclusion, the realized
children and the configuration of the last child.  A tree where none of the
moves applies is irreducible; it is stuck when its root is still unknown.

`step` works on immutable trees.  `run` drives a zipper over the spine of
unknown nodes, which is equivalent but linear in the number of steps.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Callable, Iterator

from .evaluator import CompleteTree
from .kernel import Concluded, Configuration, Continue, ResultValue, RuleState, SemanticsDef, feed, group_by_premise


class _Unknown:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "?"

    def __reduce__(self):
        return (_Unknown, ())


UNKNOWN = _Unknown()


@dataclass(frozen=True)
class PartialTree:
    config: Configuration
    outcome: object = UNKNOWN
    children: tuple["PartialTree", ...] = ()
    bundle: tuple[RuleState, ...] = ()

    @property
    def known(self) -> bool:
        return self.outcome is not UNKNOWN


def init_tree(c: Configuration) -> PartialTree:
    return PartialTree(c)


# -- strategies ----------------------------------------------------------------

@dataclass(frozen=True)
class First:
    pass


@dataclass(frozen=True)
class Random:
    seed: int = 0


@dataclass(frozen=True)
class All:
    budget: int = 256


Strategy = First | Random | All


def parse_strategy(name: str, seed: int = 0, budget: int = 256) -> Strategy:
    match name:
        case "first":
            return First()
        case "random":
            return Random(seed)
        case "all":
            return All(budget)
    raise ValueError(f"unknown strategy {name!r}")


# -- outcomes ------------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    schema: str
    address: tuple[int, ...]  # 1-based child positions from the root
    config: Configuration  # configuration of the node the schema acted on
    result: ResultValue | None = None  # result fed or produced, if any


@dataclass(frozen=True)
class Converged:
    result: ResultValue
    tree: PartialTree
    steps: int = 0
    log: tuple[Step, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class Stuck:
    tree: PartialTree
    steps: int = 0
    log: tuple[Step, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class Exhausted:
    tree: PartialTree
    steps: int
    log: tuple[Step, ...] = field(default=(), compare=False)


RunOutcome = Converged | Stuck | Exhausted


@dataclass(frozen=True)
class Next:
    tree: PartialTree
    event: Step


class Irreducible:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "Irreducible"


IRREDUCIBLE = Irreducible()


# -- the local moves ---------------------------------------------------------------

def local_moves(sem: SemanticsDef, config, children: tuple, bundle: tuple) -> list[tuple[str, object, tuple, tuple, ResultValue | None]]:
    """Moves at a node whose children are all complete.

    Each move is (schema, outcome, children, bundle, result) describing the
    replacement node; a new child c' => ? is represented by appending
    PartialTree(c').
    """
    if not children:
        if sem.is_result(config):
            return [("result-axiom", config, (), (), config)]
        states = sem.rules(config)
        return [("open", UNKNOWN, (PartialTree(p),), grp, None) for p, grp in group_by_premise(states)]
    r = children[-1].outcome
    concluded = False
    cont: list[RuleState] = []
    for st in bundle:
        # module-level name, looked up per call so a test can fault this consumer alone
        out = feed(st, r)
        if isinstance(out, Concluded):
            concluded = True
        elif isinstance(out, Continue):
            cont.append(out.next)
    moves = []
    if concluded:
        moves.append(("conclude", r, children, (), r))
    for p, grp in group_by_premise(cont):
        moves.append(("open-next", UNKNOWN, children + (PartialTree(p),), grp, r))
    return moves


def _choose(moves: list, s: Strategy, rng: random.Random | None):
    if isinstance(s, Random) and len(moves) > 1:
        if rng is None:
            rng = random.Random(s.seed)
        return moves[rng.randrange(len(moves))]
    return moves[0]


def successors(sem: SemanticsDef, t: PartialTree) -> list[Next]:
    """Every tree reachable in one step."""
    path: list[PartialTree] = []
    addr: list[int] = []
    node = t
    if node.known:
        return []
    while node.children and not node.children[-1].known:
        path.append(node)
        addr.append(len(node.children))
        node = node.children[-1]
    out = []
    for schema, outcome, children, bundle, res in local_moves(sem, node.config, node.children, node.bundle):
        new = PartialTree(node.config, outcome, children, bundle)
        for parent in reversed(path):
            new = replace(parent, children=parent.children[:-1] + (new,))
        out.append(Next(new, Step(schema, tuple(addr), node.config, res)))
    return out


def step(sem: SemanticsDef, t: PartialTree, s: Strategy = First(), rng: random.Random | None = None) -> Next | Irreducible:
    nxt = successors(sem, t)
    if not nxt:
        return IRREDUCIBLE
    return _choose(nxt, s, rng)


# -- zipper machine ------------------------------------------------------------------

class _Frame:
    __slots__ = ("config", "children", "bundle")

    def __init__(self, config, children: tuple = (), bundle: tuple = ()):
        self.config = config
        self.children = children
        self.bundle = bundle

    def copy(self) -> "_Frame":
        return _Frame(self.config, self.children, self.bundle)


class Machine:
    """Mutable spine of unknown nodes; the last frame is the deepest one."""

    def __init__(self, sem: SemanticsDef, c: Configuration):
        self.sem = sem
        self.spine: list[_Frame] = [_Frame(c)]
        self.root_done: PartialTree | None = None
        self.steps = 0
        self.log: list[Step] = []

    def clone(self) -> "Machine":
        m = Machine.__new__(Machine)
        m.sem = self.sem
        m.spine = [f.copy() for f in self.spine]
        m.root_done = self.root_done
        m.steps = self.steps
        m.log = list(self.log)
        return m

    @property
    def done(self) -> bool:
        return self.root_done is not None

    def moves(self) -> list:
        if self.done:
            return []
        top = self.spine[-1]
        return local_moves(self.sem, top.config, top.children, top.bundle)

    def address(self) -> tuple[int, ...]:
        return tuple(len(f.children) + 1 for f in self.spine[:-1])

    def apply(self, move, record: bool = True) -> None:
        schema, outcome, children, bundle, res = move
        top = self.spine[-1]
        if record:
            self.log.append(Step(schema, self.address(), top.config, res))
        self.steps += 1
        if outcome is UNKNOWN:
            # open / open-next: the new child is the last entry of children
            top.children = children[:-1]
            top.bundle = bundle
            self.spine.append(_Frame(children[-1].config))
            return
        node = PartialTree(top.config, outcome, children, ())
        self.spine.pop()
        if not self.spine:
            self.root_done = node
        else:
            self.spine[-1].children = self.spine[-1].children + (node,)

    def tree(self) -> PartialTree:
        if self.root_done is not None:
            return self.root_done
        node = None
        for f in reversed(self.spine):
            kids = f.children if node is None else f.children + (node,)
            node = PartialTree(f.config, UNKNOWN, kids, f.bundle)
        return node

    def outcome(self, record: bool) -> RunOutcome:
        log = tuple(self.log) if record else ()
        if self.root_done is not None:
            return Converged(self.root_done.outcome, self.root_done, self.steps, log)
        if not self.moves():
            return Stuck(self.tree(), self.steps, log)
        return Exhausted(self.tree(), self.steps, log)


def run(sem: SemanticsDef, c: Configuration, fuel: int, s: Strategy = First(), log: bool = False,
        on_step: Callable[[PartialTree], None] | None = None):
    """Fuel-bounded PEV.  Returns one RunOutcome, or a list of them under All."""
    if fuel < 1:
        raise ValueError("fuel must be positive")
    if isinstance(s, All):
        return run_all(sem, c, fuel, s.budget, log, on_step)
    rng = random.Random(s.seed) if isinstance(s, Random) else None
    m = Machine(sem, c)
    if on_step:
        on_step(m.tree())
    while m.steps < fuel:
        mv = m.moves()
        if not mv:
            break
        m.apply(_choose(mv, s, rng), log)
        if on_step:
            on_step(m.tree())
    return m.outcome(log)


def run_all(sem: SemanticsDef, c: Configuration, fuel: int, budget: int = 256, log: bool = False,
            on_step: Callable[[PartialTree], None] | None = None,
            on_edge: Callable[[PartialTree, PartialTree], None] | None = None) -> list[RunOutcome]:
    """Depth-first enumeration of every choice sequence; at most `budget` runs.

    on_edge sees every (before, after) step pair on every explored path.
    """
    out: list[RunOutcome] = []
    first = Machine(sem, c)
    if on_step:
        on_step(first.tree())
    stack = [first]
    while stack and len(out) < budget:
        m = stack.pop()
        while True:
            if m.steps >= fuel:
                out.append(m.outcome(log))
                break
            mv = m.moves()
            if not mv:
                out.append(m.outcome(log))
                break
            before = m.tree() if on_edge else None
            for alt in reversed(mv[1:]):
                other = m.clone()
                other.apply(alt, log)
                if on_edge:
                    on_edge(before, other.tree())
                stack.append(other)
            m.apply(mv[0], log)
            if on_step:
                on_step(m.tree())
            if on_edge:
                on_edge(before, m.tree())
    return out


def run_trees(sem: SemanticsDef, c: Configuration, fuel: int, s: Strategy = First()) -> Iterator[PartialTree]:
    """The sequence of trees visited by `step` (reference path, quadratic)."""
    t = init_tree(c)
    rng = random.Random(s.seed) if isinstance(s, Random) else None
    yield t
    for _ in range(fuel):
        n = step(sem, t, s, rng)
        if n is IRREDUCIBLE:
            return
        t = n.tree
        yield t


# -- order and shape -------------------------------------------------------------------

def strip(t: PartialTree) -> tuple:
    """The tree without bundles, as nested tuples."""
    return (t.config, t.outcome, tuple(strip(c) for c in t.children))


def tree_leq(a: PartialTree, b: PartialTree) -> bool:
    """a is below b: same shape on dom(a), and every known node of a roots the same subtree in b."""
    todo = [(a, b)]
    while todo:
        x, y = todo.pop()
        if x.config != y.config:
            return False
        if x.known:
            if strip(x) != strip(y):
                return False
            continue
        if len(x.children) > len(y.children):
            return False
        todo.extend(zip(x.children, y.children))
    return True


def tree_lt(a: PartialTree, b: PartialTree) -> bool:
    return tree_leq(a, b) and strip(a) != strip(b)


def is_complete(t: PartialTree) -> bool:
    todo = [t]
    while todo:
        x = todo.pop()
        if not x.known:
            return False
        todo.extend(x.children)
    return True


def invariant_violations(t: PartialTree) -> list[str]:
    out = []
    level = [t]
    depth = 0
    while level:
        unknown = [x for x in level if not x.known]
        if len(unknown) > 1:
            out.append(f"level {depth}: {len(unknown)} unknown nodes")
        nxt = []
        for x in level:
            if x.known and not is_complete(x):
                out.append(f"level {depth}: known node over an incomplete subtree")
            for i, ch in enumerate(x.children):
                if not ch.known:
                    if x.known:
                        out.append(f"level {depth}: unknown child under a known node")
                    if i != len(x.children) - 1:
                        out.append(f"level {depth}: unknown child is not the last one")
            nxt.extend(x.children)
        level = nxt
        depth += 1
    return out


def to_complete(t: PartialTree):
    """Convert a complete PartialTree into an evaluator CompleteTree."""
    if not is_complete(t):
        raise ValueError("tree has unknown nodes")

    def conv(x: PartialTree):
        return CompleteTree(x.config, x.outcome, tuple(conv(c) for c in x.children))

    return conv(t)
