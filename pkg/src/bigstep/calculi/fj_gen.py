"""Term generation for the Java-like calculi.

Exhaustive mode lists every expression built from the class table's names up
to a node count (constructor and method arities follow the table).  Random
mode builds terms top-down towards a target type, so most draws typecheck;
the corpus filter re-checks every draw anyway.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterator

from ..enumerate import Generator, register
from .fj import (BOOL, FALSE, OBJECT, TRUE, Cast, ClassTable, FieldAccess, FieldAssign, If, Invk, Lam, New, Var,
                 size)
from . import fji, fjl, fjo

PARAMS = ("x", "y", "z", "w")


def table_source(name: str) -> str:
    return resources.files("bigstep.calculi").joinpath("tables", f"{name}.fj").read_text()


@lru_cache(maxsize=None)
def default_table(calculus: str, name: str | None = None) -> ClassTable:
    loader = {"fjl": fjl.load_fjl, "fjo": fjo.load_fjo, "fji": fji.load_fji}[calculus]
    return loader(table_source(name or calculus))[0]


@dataclass(frozen=True)
class Flavor:
    calculus: str
    lambdas: bool = False
    casts: bool = False
    bools: bool = False
    assign: bool = False


FLAVORS = {
    "fjl": Flavor("fjl", lambdas=True, casts=True),
    "fjo": Flavor("fjo", bools=True),
    "fji": Flavor("fji", assign=True),
}


def to_config(calculus: str, e):
    if calculus == "fjl":
        return fjl.conf((), e)
    if calculus == "fji":
        return fji.IConf((), e)
    return e


def config_expr(c):
    if isinstance(c, (fjl.Conf, fji.IConf)):
        return c.expr
    return c


def config_size(c) -> int:
    return size(config_expr(c))


class _Shape:
    """Names and arities a class table offers to term construction."""

    def __init__(self, ct: ClassTable, fl: Flavor):
        self.ct, self.fl = ct, fl
        self.news = tuple((c, len(ct.fields(c))) for c in sorted(ct.classes))
        self.fields = tuple(sorted({f for d in ct.classes.values() for _, f in d.fields}))
        ms = {}
        for d in ct.classes.values():
            for m in d.methods:
                ms[m.name] = len(m.params)
        for i in ct.interfaces.values():
            for s in i.methods:
                ms[s.name] = len(s.params)
        self.methods = tuple(sorted(ms.items()))
        self.lam_arities = tuple(sorted({len(ct.functional(i).params) for i in ct.interfaces if ct.functional(i)}))
        self.cast_types = tuple(sorted(ct.interfaces)) + tuple(sorted(ct.classes)) if fl.casts else ()


# -- exhaustive ------------------------------------------------------------------------------

def _exhaustive(shape: _Shape, lo: int, hi: int) -> Iterator:
    @lru_cache(maxsize=None)
    def exact(s: int, scope: tuple) -> tuple:
        out: list = []
        if s < 1:
            return ()
        if s == 1:
            out += [Var(x) for x in scope]
            if shape.fl.bools:
                out += [TRUE, FALSE]
        for c, n in shape.news:
            out += [New(c, args) for args in lists(s - 1, n, scope)]
        for f in shape.fields:
            out += [FieldAccess(o, f) for o in exact(s - 1, scope)]
        for m, n in shape.methods:
            for k in range(1, s - n):
                for o in exact(k, scope):
                    out += [Invk(o, m, args) for args in lists(s - 1 - k, n, scope)]
        if shape.fl.lambdas and not scope:
            for n in shape.lam_arities:
                ps = PARAMS[:n]
                out += [Lam(ps, b) for b in exact(s - 1, ps) if not isinstance(b, Lam)]
        for t in shape.cast_types:
            out += [Cast(t, e) for e in exact(s - 1, scope)]
        if shape.fl.bools:
            for i in range(1, s - 2):
                for j in range(1, s - 1 - i):
                    k = s - 1 - i - j
                    for a in exact(i, scope):
                        for b in exact(j, scope):
                            out += [If(a, b, c) for c in exact(k, scope)]
        if shape.fl.assign:
            for f in shape.fields:
                for i in range(1, s - 1):
                    for o in exact(i, scope):
                        out += [FieldAssign(o, f, v) for v in exact(s - 1 - i, scope)]
        return tuple(out)

    @lru_cache(maxsize=None)
    def lists(s: int, n: int, scope: tuple) -> tuple:
        if n == 0:
            return ((),) if s == 0 else ()
        out = []
        for k in range(1, s - n + 2):
            for a in exact(k, scope):
                out += [(a,) + rest for rest in lists(s - k, n - 1, scope)]
        return tuple(out)

    for s in range(max(lo, 1), hi + 1):
        yield from exact(s, ())


# -- random typed construction -----------------------------------------------------------------

class _Builder:
    def __init__(self, ct: ClassTable, fl: Flavor, rng: random.Random):
        self.ct, self.fl, self.rng = ct, fl, rng
        self.minimal: dict = {}
        self._fill_minimal()

    def atoms(self) -> list:
        out = sorted(self.ct.classes) + ([OBJECT] if self.fl.calculus != "fji" else [])
        if self.fl.calculus == "fjl":
            out += sorted(self.ct.interfaces)
        if self.fl.bools:
            out.append(BOOL)
        return out

    def sub(self, s, t) -> bool:
        return all(any(self.ct.subtype(a, b) for b in fjo.atoms(t)) for a in fjo.atoms(s))

    def _fill_minimal(self) -> None:
        """Smallest closed term found for each atomic type (fixpoint over constructors)."""
        best = self.minimal
        if self.fl.bools:
            best[BOOL] = TRUE
        changed = True
        while changed:
            changed = False
            for c in sorted(self.ct.classes):
                fs = self.ct.fields(c)
                args = [self._pick_min(t) for t, _ in fs]
                if any(a is None for a in args):
                    continue
                e = New(c, tuple(args))
                for t in self.ct.supertypes(c):
                    if t not in best or size(e) < size(best[t]):
                        best[t] = e
                        changed = True
            if self.fl.lambdas:
                for i in sorted(self.ct.interfaces):
                    sig = self.ct.functional(i)
                    if sig is None:
                        continue
                    ps = PARAMS[: len(sig.params)]
                    body = next((Var(x) for x, t in zip(ps, sig.params) if self.ct.subtype(t, sig.ret)), None)
                    body = body or self._pick_min(sig.ret)
                    if body is None or isinstance(body, Lam):
                        continue
                    e = Cast(i, Lam(ps, body))
                    for t in self.ct.supertypes(i):
                        if t not in best or size(e) < size(best[t]):
                            best[t] = e
                            changed = True

    def _pick_min(self, t):
        opts = [self.minimal[a] for a in sorted(fjo.atoms(t)) if a in self.minimal]
        return min(opts, key=size) if opts else None

    def inhabited(self, t) -> bool:
        return any(a in self.minimal for a in fjo.atoms(t))

    def term(self, t, budget: int, scope: tuple = (), lam_ok: bool = True):
        """A term whose type should be below t."""
        ct, rng = self.ct, self.rng
        opts: list = []
        for x, xt in scope:
            if self.sub(xt, t):
                opts.append(("var", x))
        if budget > 1:
            for c in sorted(ct.classes):
                if self.sub(c, t) and all(self.inhabited(ft) for ft, _ in ct.fields(c)):
                    opts.append(("new", c))
            for c in sorted(ct.classes):
                for ft, f in ct.classes[c].fields:
                    if self.sub(ft, t):
                        opts.append(("field", (c, f)))
                        if self.fl.assign:
                            opts.append(("assign", (c, f, ft)))
            for owner in sorted(ct.classes) + sorted(ct.interfaces):
                decls = ct.classes[owner].methods if owner in ct.classes else ct.interfaces[owner].methods
                for md in decls:
                    if self.sub(md.ret, t):
                        opts.append(("invk", (owner, md.name)))
            if self.fl.lambdas and lam_ok:
                for i in sorted(ct.interfaces):
                    if ct.functional(i) and self.sub(i, t):
                        opts.append(("lam", i))
                        opts.append(("cast", i))
            if self.fl.bools and budget > 3:
                opts.append(("if", None))
            if self.fl.bools and self.sub(BOOL, t):
                opts.append(("bool", None))
        if not opts:
            return self._pick_min(t)
        kind, arg = rng.choice(opts)
        b = budget - 1
        match kind:
            case "var":
                return Var(arg)
            case "bool":
                return rng.choice((TRUE, FALSE))
            case "new":
                fs = ct.fields(arg)
                return New(arg, tuple(self.term(ft, self._share(b, len(fs)), scope) for ft, _ in fs))
            case "field":
                c, f = arg
                return FieldAccess(self.term(c, b, scope, False), f)
            case "assign":
                c, f, ft = arg
                return FieldAssign(self.term(c, b // 2, scope, False), f, self.term(ft, b // 2, scope))
            case "invk":
                return self._invk(arg, b, scope)
            case "lam":
                sig = ct.functional(arg)
                ps = PARAMS[: len(sig.params)]
                return Lam(ps, self.term(sig.ret, b, tuple(zip(ps, sig.params)), False))
            case "cast":
                return Cast(arg, self.term(arg, b, scope, True))
            case "if":
                return If(self.term(BOOL, b // 3, scope), self.term(t, b // 3, scope), self.term(t, b // 3, scope))
        raise AssertionError(kind)

    def _share(self, budget: int, n: int) -> int:
        return max(1, budget // max(n, 1))

    def _invk(self, arg, b: int, scope: tuple):
        owner, m = arg
        comps, _ = self.ct.mtype(owner, m)
        n = len(comps[0])
        recv = self.term(owner, b // 2, scope, False)
        per = self._share(b // 2, n)
        same = [k for k in comps if n and len(set(k)) == 1]
        if len(same) > 1 and self.rng.random() < 0.5:
            # one expression in every position, typed by the union of the alternatives
            u = frozenset().union(*(fjo.atoms(k[0]) for k in same))
            e = self.term(u, per, scope)
            return Invk(recv, m, (e,) * n)
        comp = self.rng.choice(comps)
        return Invk(recv, m, tuple(self.term(t, per, scope) for t in comp))


def fj_generator(calculus: str, ct: ClassTable) -> Generator:
    fl = FLAVORS[calculus]
    shape = _Shape(ct, fl)

    def exhaustive(lo: int, hi: int):
        for e in _exhaustive(shape, lo, hi):
            yield to_config(calculus, e)

    b = _Builder(ct, fl, random.Random(0))

    def rand(rng: random.Random, max_size: int):
        b.rng = rng
        targets = [t for t in b.atoms() if b.inhabited(t)]
        if fl.bools:
            cs = [t for t in targets if t != BOOL]
            targets += [frozenset(p) for p in zip(cs, cs[1:])]
        t = rng.choice(targets)
        return to_config(calculus, b.term(t, rng.randint(2, max(2, max_size)), (), lam_ok=False))

    return Generator(exhaustive, rand, config_size)


for _name in FLAVORS:
    register(_name)(lambda _n=_name: fj_generator(_n, default_table(_n)))
