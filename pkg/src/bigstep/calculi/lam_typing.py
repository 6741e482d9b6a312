"""Type systems for the lambda-calculus.

Simple types with equi-recursive types: syntax directed except for the domain
of an application, which is taken from the argument's synthesized type, the
function's synthesized domain, or a finite universe of candidates.

Intersection and union types: the rules are not syntax directed, so typing
is decided by saturation.  For a fixed finite universe U of types, closed
under subterms, derive(env, e) is the set of U-types derivable with every
intermediate type in U.  The optional union-elimination rule abstracts
occurrences of a subterm and is bounded by a nesting depth.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

from .lam import Abs, App, Choice, Const, LamExpr, Plus, Succ, Var, free_vars
from .lam_types import EVEN, NAT, ODD, And, Arrow, Base, LamType, Mu, Or, TVar, arrows, type_equal, type_subterms, unfold

Env = tuple  # sorted tuple of (name, type)


def env_of(d: dict | None) -> Env:
    return tuple(sorted((d or {}).items(), key=lambda kv: kv[0]))


def _lookup(env: Env, x: str) -> LamType | None:
    for k, v in env:
        if k == x:
            return v
    return None


def _extend(env: Env, x: str, t: LamType) -> Env:
    return tuple(sorted([kv for kv in env if kv[0] != x] + [(x, t)], key=lambda kv: kv[0]))


# -- simple recursive types -------------------------------------------------------------

_A = TVar("a")
OMEGA_T = Mu("a", Arrow(_A, NAT))  # rec a . a -> nat

SIMPLE_UNIVERSE: tuple[LamType, ...] = (
    NAT,
    arrows(NAT, NAT),
    arrows(NAT, NAT, NAT),
    Arrow(arrows(NAT, NAT), NAT),
    Arrow(arrows(NAT, NAT), arrows(NAT, NAT)),
    OMEGA_T,
    Arrow(OMEGA_T, NAT),
    Mu("a", Arrow(_A, _A)),
    Mu("a", Arrow(NAT, _A)),
)


def _is_nat(t: LamType) -> bool:
    return unfold(t) == NAT


class SimpleTyper:
    def __init__(self, universe: Sequence[LamType] = SIMPLE_UNIVERSE, fool: bool = False):
        self.universe = tuple(universe)
        self.fool = fool
        self._memo: dict = {}
        self._doms: dict = {}

    def synth(self, env: Env, e: LamExpr) -> LamType | None:
        match e:
            case Var(x):
                return _lookup(env, x)
            case Const():
                return NAT
            case Abs(x, b, t) if t is not None:
                c = self.synth(_extend(env, x, t), b)
                return None if c is None else Arrow(t, c)
            case App(f, a):
                if self.fool and f == Const(0) and a == Const(0):
                    return NAT
                ft = self.synth(env, f)
                if ft is None:
                    return None
                ft = unfold(ft)
                if isinstance(ft, Arrow) and self.check(env, a, ft.dom):
                    return ft.cod
                return None
            case Succ(a):
                return NAT if self.check(env, a, NAT) else None
            case Choice(l, r):
                lt = self.synth(env, l)
                if lt is not None and self.check(env, r, lt):
                    return lt
                return None
        return None

    def domains(self, env: Env, f: LamExpr, a: LamExpr) -> list[LamType]:
        key = (env, f, a)
        got = self._doms.get(key)
        if got is None:
            got = self._doms[key] = self._domains(env, f, a)
        return got

    def _domains(self, env: Env, f: LamExpr, a: LamExpr) -> list[LamType]:
        out = []
        at = self.synth(env, a)
        if at is not None:
            out.append(at)
        ft = self.synth(env, f)
        if ft is not None:
            ft = unfold(ft)
            if isinstance(ft, Arrow):
                out.append(ft.dom)
        if isinstance(a, Abs) and a.ann is not None:
            out.append(a.ann)
        out.extend(self.universe)
        seen: list = []
        for t in out:
            if not any(type_equal(t, s) for s in seen):
                seen.append(t)
        return seen

    def check(self, env: Env, e: LamExpr, t: LamType) -> bool:
        key = (env, e, t)
        got = self._memo.get(key)
        if got is None:
            got = self._check(env, e, t)
            self._memo[key] = got
        return got

    def _check(self, env: Env, e: LamExpr, t: LamType) -> bool:
        match e:
            case Var(x):
                s = _lookup(env, x)
                return s is not None and type_equal(s, t)
            case Const():
                return _is_nat(t)
            case Abs(x, b, ann):
                u = unfold(t)
                if not isinstance(u, Arrow):
                    return False
                if ann is not None and not type_equal(ann, u.dom):
                    return False
                return self.check(_extend(env, x, u.dom), b, u.cod)
            case App(f, a):
                if self.fool and f == Const(0) and a == Const(0) and _is_nat(t):
                    return True
                return self.app_domain(env, f, a, t) is not None
            case Succ(a):
                return _is_nat(t) and self.check(env, a, NAT)
            case Choice(l, r):
                return self.check(env, l, t) and self.check(env, r, t)
        return False

    def app_domain(self, env: Env, f: LamExpr, a: LamExpr, t: LamType) -> LamType | None:
        for d in self.domains(env, f, a):
            if self.check(env, a, d) and self.check(env, f, Arrow(d, t)):
                return d
        return None


def typecheck_simple(env: dict | Env | None, e: LamExpr, t: LamType, universe: Sequence[LamType] = SIMPLE_UNIVERSE,
                     fool: bool = False) -> bool:
    if isinstance(env, dict) or env is None:
        env = env_of(env)
    return SimpleTyper(universe, fool).check(env, e, t)


# -- intersection and union types ---------------------------------------------------------

def subtype_iu(a: LamType, b: LamType) -> bool:
    """Least preorder with A&B <= A, A&B <= B, A <= A|B, A <= B|A (and the &-left rule)."""
    if a == b:
        return True
    if isinstance(a, And) and (subtype_iu(a.left, b) or subtype_iu(a.right, b)):
        return True
    if isinstance(b, Or) and (subtype_iu(a, b.left) or subtype_iu(a, b.right)):
        return True
    return False


def close_universe(types: Iterable[LamType]) -> tuple[LamType, ...]:
    out: list = []
    for t in types:
        for s in sorted(type_subterms(t), key=str):
            if s not in out:
                out.append(s)
    return tuple(out)


_NN = arrows(NAT, NAT)

IU_UNIVERSE: tuple[LamType, ...] = close_universe([
    NAT,
    _NN,
    arrows(NAT, NAT, NAT),
    Arrow(_NN, NAT),
    Arrow(_NN, _NN),
    And(_NN, NAT),
    Arrow(And(_NN, NAT), NAT),
    Or(NAT, _NN),
    Arrow(Or(NAT, _NN), Or(NAT, _NN)),
    And(_NN, arrows(_NN, _NN)),
])

ARITH_UNIVERSE: tuple[LamType, ...] = close_universe([
    NAT, EVEN, ODD,
    Or(EVEN, ODD), Or(ODD, EVEN),
    And(EVEN, NAT), And(ODD, NAT),
    arrows(EVEN, EVEN), arrows(ODD, EVEN), arrows(NAT, NAT),
])


def _occurrences(e: LamExpr, bound: frozenset = frozenset(), path: tuple = ()) -> list[tuple[tuple, LamExpr, frozenset]]:
    out = [(path, e, bound)]
    match e:
        case Abs(x, b, _):
            out += _occurrences(b, bound | {x}, path + (0,))
        case Succ(a):
            out += _occurrences(a, bound, path + (0,))
        case App(a, b) | Choice(a, b) | Plus(a, b):
            out += _occurrences(a, bound, path + (0,)) + _occurrences(b, bound, path + (1,))
    return out


def _replace(e: LamExpr, path: tuple, new: LamExpr) -> LamExpr:
    if not path:
        return new
    i, rest = path[0], path[1:]
    match e:
        case Abs(x, b, t):
            return Abs(x, _replace(b, rest, new), t)
        case Succ(a):
            return Succ(_replace(a, rest, new))
        case App(a, b):
            return App(_replace(a, rest, new), b) if i == 0 else App(a, _replace(b, rest, new))
        case Choice(a, b):
            return Choice(_replace(a, rest, new), b) if i == 0 else Choice(a, _replace(b, rest, new))
        case Plus(a, b):
            return Plus(_replace(a, rest, new), b) if i == 0 else Plus(a, _replace(b, rest, new))
    raise ValueError(path)


def _fresh(e: LamExpr, env: Env) -> str:
    used = set(free_vars(e)) | {k for k, _ in env}
    for occ in _occurrences(e):
        if isinstance(occ[1], (Abs, Var)):
            used.add(occ[1].var if isinstance(occ[1], Abs) else occ[1].name)
    i = 0
    while f"_u{i}" in used:
        i += 1
    return f"_u{i}"


def abstractions(e: LamExpr, env: Env, max_occ: int = 4) -> list[tuple[LamExpr, str, LamExpr]]:
    """All (e0, x, e') with e0[e'/x] = e, x occurring in e0; e' is not a variable."""
    occs = _occurrences(e)
    by_term: dict = {}
    for path, sub, bound in occs:
        if isinstance(sub, Var):
            continue
        if free_vars(sub) & bound:
            continue  # abstracting would capture
        by_term.setdefault(sub, []).append(path)
    x = _fresh(e, env)
    out = []
    for sub, paths in by_term.items():
        # keep only maximal positions: nested occurrences of the same term are disjoint anyway
        paths = paths[:max_occ]
        n = len(paths)
        for mask in range(1, 1 << n):
            chosen = [paths[i] for i in range(n) if mask >> i & 1]
            if any(p[: len(q)] == q for p in chosen for q in chosen if p != q):
                continue
            e0 = e
            for p in sorted(chosen, key=len, reverse=True):
                e0 = _replace(e0, p, Var(x))
            out.append((e0, x, sub))
    return out


class IUTyper:
    def __init__(self, universe: Sequence[LamType] = IU_UNIVERSE, with_orE: bool = False, arith: bool = False,
                 depth: int = 8):
        self.universe = close_universe(universe)
        self.with_orE = with_orE
        self.arith = arith
        self.depth = depth
        self._memo: dict = {}
        self.arrows_by_dom: dict = {}
        for t in self.universe:
            if isinstance(t, Arrow):
                self.arrows_by_dom.setdefault(t.dom, []).append(t)
        self.ands = [t for t in self.universe if isinstance(t, And)]
        self.ors = [t for t in self.universe if isinstance(t, Or)]

    def derive(self, env: Env, e: LamExpr, depth: int | None = None) -> frozenset:
        if depth is None:
            depth = self.depth
        key = (env, e, depth if self.with_orE else 0)
        got = self._memo.get(key)
        if got is None:
            got = self._derive(env, e, depth)
            self._memo[key] = got
        return got

    def _close(self, s: set) -> frozenset:
        changed = True
        while changed:
            changed = False
            for t in list(s):
                if isinstance(t, And):
                    for p in (t.left, t.right):
                        if p not in s:
                            s.add(p)
                            changed = True
            for t in self.ands:
                if t not in s and t.left in s and t.right in s:
                    s.add(t)
                    changed = True
            for t in self.ors:
                if t not in s and (t.left in s or t.right in s):
                    s.add(t)
                    changed = True
        return frozenset(s)

    def _derive(self, env: Env, e: LamExpr, depth: int) -> frozenset:
        s: set = set()
        match e:
            case Var(x):
                t = _lookup(env, x)
                if t is not None:
                    s.add(t)
            case Const(n):
                s.add(NAT)
                if self.arith:
                    s.add(EVEN if n % 2 == 0 else ODD)
            case Abs(x, b, ann):
                for dom, arrs in self.arrows_by_dom.items():
                    if ann is not None and ann != dom:
                        continue
                    body = self.derive(_extend(env, x, dom), b, depth)
                    for t in arrs:
                        if t.cod in body:
                            s.add(t)
            case App(f, a):
                df, da = self.derive(env, f, depth), self.derive(env, a, depth)
                for t in df:
                    if isinstance(t, Arrow) and t.dom in da:
                        s.add(t.cod)
            case Succ(a):
                if NAT in self.derive(env, a, depth):
                    s.add(NAT)
            case Choice(l, r):
                s |= self.derive(env, l, depth) & self.derive(env, r, depth)
            case Plus(l, r) if self.arith:
                both = self.derive(env, l, depth) & self.derive(env, r, depth)
                if EVEN in both or ODD in both:
                    s.add(EVEN)
        s = set(self._close(s))
        if self.with_orE and depth > 0:
            for e0, x, sub in abstractions(e, env):
                dsub = self.derive(env, sub, depth - 1)
                for t in self.ors:
                    if t in dsub:
                        left = self.derive(_extend(env, x, t.left), e0, depth - 1)
                        right = self.derive(_extend(env, x, t.right), e0, depth - 1)
                        s |= left & right
            s = set(self._close(s))
        return frozenset(t for t in s if t in self.universe or isinstance(t, Base))

    def check(self, env: Env, e: LamExpr, t: LamType) -> bool:
        return t in self.derive(env, e)


@lru_cache(maxsize=64)
def _iu_typer(universe: tuple, with_orE: bool, arith: bool, depth: int) -> IUTyper:
    return IUTyper(universe, with_orE, arith, depth)


def typable_iu(env: dict | Env | None, e: LamExpr, t: LamType, depth: int = 8, with_orE: bool = False,
               universe: Sequence[LamType] | None = None, arith: bool | None = None) -> bool:
    if isinstance(env, dict) or env is None:
        env = env_of(env)
    if arith is None:
        arith = any(isinstance(s, Base) and s.name != "nat" for s in type_subterms(t))
    base = universe if universe is not None else (ARITH_UNIVERSE if arith else IU_UNIVERSE)
    extra = [t] + [v for _, v in env]
    uni = close_universe(list(base) + extra)
    return _iu_typer(uni, with_orE, arith, depth).check(env, e, t)
