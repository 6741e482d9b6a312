"""Call-by-value lambda-calculus with numerals, succ and nondeterministic choice.

Concrete syntax:

    e ::= x | n | fun x . e | fun x : T . e | e e | succ e | e (+) e | + e e
    T ::= nat | even | odd | a | T -> T | T & T | T | T | rec a . T
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .._deep import cache_hash
from ..kernel import CONCLUDE, REJECT, SemanticsDef, start
from .lam_types import And, Arrow, Base, LamType, Mu, Or, TVar, show_type


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Const:
    n: int

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Abs:
    var: str
    body: "LamExpr"
    ann: LamType | None = None

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class App:
    fun: "LamExpr"
    arg: "LamExpr"

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Succ:
    arg: "LamExpr"

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Choice:
    left: "LamExpr"
    right: "LamExpr"

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Plus:
    left: "LamExpr"
    right: "LamExpr"

    def __str__(self) -> str:
        return show(self)


LamExpr = Var | Const | Abs | App | Succ | Choice | Plus
cache_hash(Abs, App, Succ, Choice, Plus)


def is_value(e: LamExpr) -> bool:
    return isinstance(e, (Const, Abs))


def free_vars(e: LamExpr) -> frozenset[str]:
    match e:
        case Var(x):
            return frozenset([x])
        case Const():
            return frozenset()
        case Abs(x, b, _):
            return free_vars(b) - {x}
        case App(a, b) | Choice(a, b) | Plus(a, b):
            return free_vars(a) | free_vars(b)
        case Succ(a):
            return free_vars(a)
    raise TypeError(e)


def is_closed(e: LamExpr) -> bool:
    return not free_vars(e)


def subst(e: LamExpr, x: str, v: LamExpr) -> LamExpr:
    """e[v/x]; v is closed so no capture can happen."""
    match e:
        case Var(y):
            return v if y == x else e
        case Const():
            return e
        case Abs(y, b, t):
            return e if y == x else Abs(y, subst(b, x, v), t)
        case App(a, b):
            return App(subst(a, x, v), subst(b, x, v))
        case Succ(a):
            return Succ(subst(a, x, v))
        case Choice(a, b):
            return Choice(subst(a, x, v), subst(b, x, v))
        case Plus(a, b):
            return Plus(subst(a, x, v), subst(b, x, v))
    raise TypeError(e)


def size(e: LamExpr) -> int:
    """Node count where a variable occurrence is free and a binder costs two
    (the abstraction node and its bound name)."""
    match e:
        case Var():
            return 0
        case Const():
            return 1
        case Abs(_, b, _):
            return 2 + size(b)
        case App(a, b) | Choice(a, b) | Plus(a, b):
            return 1 + size(a) + size(b)
        case Succ(a):
            return 1 + size(a)
    raise TypeError(e)


def subterms(e: LamExpr) -> list[LamExpr]:
    out = [e]
    match e:
        case Abs(_, b, _) | Succ(b):
            out += subterms(b)
        case App(a, b) | Choice(a, b) | Plus(a, b):
            out += subterms(a) + subterms(b)
    return out


# -- printing ------------------------------------------------------------------

def _level(e: LamExpr) -> int:
    match e:
        case Abs():
            return 0
        case Choice():
            return 1
        case App():
            return 2
        case Succ() | Plus():
            return 3
    return 4


def show(e: LamExpr, need: int = 0) -> str:
    match e:
        case Var(x):
            s = x
        case Const(n):
            s = str(n)
        case Abs(x, b, None):
            s = f"fun {x} . {show(b)}"
        case Abs(x, b, t):
            s = f"fun {x} : {show_type(t)} . {show(b)}"
        case App(a, b):
            s = f"{show(a, 2)} {show(b, 4)}"
        case Succ(a):
            s = f"succ {show(a, 3)}"
        case Plus(a, b):
            s = f"+ {show(a, 4)} {show(b, 4)}"
        case Choice(a, b):
            s = f"{show(a, 1)} (+) {show(b, 2)}"
        case _:
            raise TypeError(e)
    return f"({s})" if _level(e) < need else s


# -- parsing -------------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at offset {pos}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\(\+\))|(->)|(\d+)|([A-Za-z_][A-Za-z0-9_']*)|([().:&|+]))")
KEYWORDS = {"fun", "succ", "rec"}
BASE_TYPES = {"nat", "even", "odd"}


def tokenize(src: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    src = src.rstrip()
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {src[pos:].lstrip()[:1]!r}", pos)
        start_ = m.start(m.lastindex)
        kind = ["choice", "arrow", "num", "ident", "sym"][m.lastindex - 1]
        text = m.group(m.lastindex)
        if kind == "ident" and text in KEYWORDS:
            kind = "kw"
        toks.append((kind, text, start_))
        pos = m.end()
    toks.append(("eof", "", len(src)))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self) -> tuple[str, str, int]:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> None:
        k, t, p = self.take()
        if t != text or k == "eof":
            raise ParseError(f"expected {text!r}, found {t or 'end of input'!r}", p)

    def ident(self) -> str:
        k, t, p = self.take()
        if k != "ident":
            raise ParseError(f"expected identifier, found {t or 'end of input'!r}", p)
        return t

    def done(self) -> None:
        k, t, p = self.peek()
        if k != "eof":
            raise ParseError(f"unexpected {t!r}", p)

    # expressions
    def expr(self) -> LamExpr:
        if self.peek()[1] == "fun":
            return self.fun()
        e = self.app()
        while self.peek()[0] == "choice":
            self.take()
            rhs = self.fun() if self.peek()[1] == "fun" else self.app()
            e = Choice(e, rhs)
        return e

    def fun(self) -> LamExpr:
        self.expect("fun")
        x = self.ident()
        ann = None
        if self.peek()[1] == ":":
            self.take()
            ann = self.type_()
        self.expect(".")
        return Abs(x, self.expr(), ann)

    def _starts_prefix(self) -> bool:
        k, t, _ = self.peek()
        return k in ("num", "ident") or t in ("(", "succ", "+")

    def app(self) -> LamExpr:
        e = self.prefix()
        while self._starts_prefix():
            e = App(e, self.prefix())
        return e

    def prefix(self) -> LamExpr:
        k, t, p = self.peek()
        if t == "succ":
            self.take()
            return Succ(self.prefix())
        if t == "+" and k == "sym":
            self.take()
            a = self.prefix()
            return Plus(a, self.prefix())
        return self.atom()

    def atom(self) -> LamExpr:
        k, t, p = self.take()
        if k == "num":
            return Const(int(t))
        if k == "ident":
            return Var(t)
        if t == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise ParseError(f"unexpected {t or 'end of input'!r}", p)

    # types
    def type_(self) -> LamType:
        if self.peek()[1] == "rec":
            self.take()
            a = self.ident()
            self.expect(".")
            return Mu(a, self.type_())
        t = self.or_type()
        if self.peek()[0] == "arrow":
            self.take()
            return Arrow(t, self.type_())
        return t

    def or_type(self) -> LamType:
        t = self.and_type()
        while self.peek()[1] == "|":
            self.take()
            t = Or(t, self.and_type())
        return t

    def and_type(self) -> LamType:
        t = self.atom_type()
        while self.peek()[1] == "&":
            self.take()
            t = And(t, self.atom_type())
        return t

    def atom_type(self) -> LamType:
        k, t, p = self.take()
        if k == "ident":
            return Base(t) if t in BASE_TYPES else TVar(t)
        if t == "(":
            ty = self.type_()
            self.expect(")")
            return ty
        if t == "rec":
            self.i -= 1
            return self.type_()
        raise ParseError(f"expected a type, found {t or 'end of input'!r}", p)


def parse(src: str) -> LamExpr:
    p = _Parser(src)
    e = p.expr()
    p.done()
    return e


def parse_type(src: str) -> LamType:
    p = _Parser(src)
    t = p.type_()
    p.done()
    return t


# -- semantics -----------------------------------------------------------------

def _app_schedule(e2: LamExpr):
    def nxt(rs: tuple) -> object:
        if len(rs) == 1:
            return e2 if isinstance(rs[0], Abs) else REJECT
        if len(rs) == 2:
            f = rs[0]
            return subst(f.body, f.var, rs[1])
        return CONCLUDE
    return nxt


def _conclude(rs: tuple) -> object:
    return CONCLUDE


def _dummy(expected: LamExpr):
    # continuation r => r: only the result axiom can fill it
    def nxt(rs: tuple) -> object:
        return CONCLUDE if rs[-1] == expected else REJECT
    return nxt


def lam_semantics(succ: bool = True, plus: bool = False, name: str = "lam") -> SemanticsDef:
    """Rules app (left to right), succ, choice; optionally + on numerals."""

    def open_rules(c: LamExpr):
        match c:
            case App(e1, e2):
                return [start("app", c, e1, _app_schedule(e2))]
            case Succ(e) if succ:
                def s(rs, c=c):
                    if len(rs) == 1:
                        return Const(rs[0].n + 1) if isinstance(rs[0], Const) else REJECT
                    return _dummy(Const(rs[0].n + 1))(rs)
                return [start("succ", c, e, s)]
            case Choice(e1, e2):
                return [start("choice/1", c, e1, _conclude), start("choice/2", c, e2, _conclude)]
            case Plus(e1, e2) if plus:
                def s(rs, e2=e2):
                    if len(rs) <= 2 and not isinstance(rs[-1], Const):
                        return REJECT
                    if len(rs) == 1:
                        return e2
                    total = Const(rs[0].n + rs[1].n)
                    if len(rs) == 2:
                        return total
                    return CONCLUDE if rs[2] == total else REJECT
                return [start("plus", c, e1, s)]
        return []

    return SemanticsDef(name=name, is_result=is_value, open_rules=open_rules, bound=4, show=show, calculus="lam")


LAM = lam_semantics()
LAM_NO_SUCC = lam_semantics(succ=False, name="lam-no-succ")
LAM_ARITH = lam_semantics(plus=True, name="lam-arith")

OMEGA_HALF = Abs("x", App(Var("x"), Var("x")))
OMEGA = App(OMEGA_HALF, OMEGA_HALF)
