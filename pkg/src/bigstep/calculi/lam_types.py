"""Types for the lambda-calculus: base types, arrows, equi-recursive mu-types,
intersections and unions."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .._deep import cache_hash


@dataclass(frozen=True)
class Base:
    name: str  # nat, even, odd

    def __str__(self) -> str:
        return show_type(self)


@dataclass(frozen=True)
class Arrow:
    dom: "LamType"
    cod: "LamType"

    def __str__(self) -> str:
        return show_type(self)


@dataclass(frozen=True)
class TVar:
    name: str

    def __str__(self) -> str:
        return show_type(self)


@dataclass(frozen=True)
class Mu:
    var: str
    body: "LamType"

    def __str__(self) -> str:
        return show_type(self)


@dataclass(frozen=True)
class And:
    left: "LamType"
    right: "LamType"

    def __str__(self) -> str:
        return show_type(self)


@dataclass(frozen=True)
class Or:
    left: "LamType"
    right: "LamType"

    def __str__(self) -> str:
        return show_type(self)


LamType = Base | Arrow | TVar | Mu | And | Or
cache_hash(Arrow, Mu, And, Or)

NAT = Base("nat")
EVEN = Base("even")
ODD = Base("odd")


def arrows(*ts: LamType) -> LamType:
    """arrows(a, b, c) = a -> b -> c"""
    out = ts[-1]
    for t in reversed(ts[:-1]):
        out = Arrow(t, out)
    return out


def _level(t: LamType) -> int:
    match t:
        case Arrow() | Mu():
            return 0
        case Or():
            return 1
        case And():
            return 2
    return 3


def show_type(t: LamType, need: int = 0) -> str:
    match t:
        case Base(n) | TVar(n):
            s = n
        case Arrow(a, b):
            s = f"{show_type(a, 1)} -> {show_type(b, 0)}"
        case Mu(a, b):
            s = f"rec {a} . {show_type(b, 0)}"
        case Or(a, b):
            s = f"{show_type(a, 1)} | {show_type(b, 2)}"
        case And(a, b):
            s = f"{show_type(a, 2)} & {show_type(b, 3)}"
        case _:
            raise TypeError(t)
    return f"({s})" if _level(t) < need else s


# -- recursive types -----------------------------------------------------------

def subst_type(t: LamType, a: str, s: LamType) -> LamType:
    match t:
        case TVar(n):
            return s if n == a else t
        case Base():
            return t
        case Arrow(d, c):
            return Arrow(subst_type(d, a, s), subst_type(c, a, s))
        case Mu(b, body):
            if b == a:
                return t
            return Mu(b, subst_type(body, a, s))
        case And(l, r):
            return And(subst_type(l, a, s), subst_type(r, a, s))
        case Or(l, r):
            return Or(subst_type(l, a, s), subst_type(r, a, s))
    raise TypeError(t)


def unfold(t: LamType) -> LamType:
    """Unroll leading mu binders until the head is a constructor."""
    seen = 0
    while isinstance(t, Mu):
        t = subst_type(t.body, t.var, t)
        seen += 1
        if seen > 64:
            raise ValueError("non-contractive recursive type")
    return t


def contractive(t: LamType, guarded: frozenset = frozenset(), unguarded: frozenset = frozenset()) -> bool:
    """Every mu-bound variable occurs under an arrow."""
    match t:
        case TVar(n):
            return n not in unguarded
        case Base():
            return True
        case Arrow(d, c):
            g = guarded | unguarded
            return contractive(d, g, frozenset()) and contractive(c, g, frozenset())
        case Mu(a, body):
            return contractive(body, guarded - {a}, unguarded | {a})
        case And(l, r) | Or(l, r):
            return contractive(l, guarded, unguarded) and contractive(r, guarded, unguarded)
    raise TypeError(t)


@lru_cache(maxsize=1 << 16)
def type_equal(a: LamType, b: LamType) -> bool:
    """Equality of the regular trees denoted by two types (coinductive)."""
    assumed: set = set()
    todo = [(a, b)]
    while todo:
        x, y = todo.pop()
        if (x, y) in assumed:
            continue
        assumed.add((x, y))
        x, y = unfold(x), unfold(y)
        match x, y:
            case Base(n), Base(m):
                if n != m:
                    return False
            case Arrow(d1, c1), Arrow(d2, c2):
                todo.append((d1, d2))
                todo.append((c1, c2))
            case And(l1, r1), And(l2, r2):
                todo.append((l1, l2))
                todo.append((r1, r2))
            case Or(l1, r1), Or(l2, r2):
                todo.append((l1, l2))
                todo.append((r1, r2))
            case TVar(n), TVar(m):
                if n != m:
                    return False
            case _:
                return False
    return True


def free_tvars(t: LamType) -> set[str]:
    match t:
        case TVar(n):
            return {n}
        case Base():
            return set()
        case Arrow(l, r) | And(l, r) | Or(l, r):
            return free_tvars(l) | free_tvars(r)
        case Mu(a, body):
            return free_tvars(body) - {a}
    raise TypeError(t)


def type_subterms(t: LamType) -> set[LamType]:
    out = {t}
    match t:
        case Arrow(l, r) | And(l, r) | Or(l, r):
            out |= type_subterms(l) | type_subterms(r)
    return out
