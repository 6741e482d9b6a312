"""Java-like calculus with lambdas and functional-interface target types.

Configurations pair an environment (the current stack frame) with an
expression; objects and lambdas are results.  A lambda under any environment
is the lambda itself: well-typed lambda bodies mention only their parameters.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from ..kernel import CONCLUDE, REJECT, SemanticsDef, start
from ..soundness import IndexedPredicate
from .fj import OBJECT, Cast, ClassTable, FieldAccess, Invk, Lam, New, Obj, Var, check_bodies, parse_program, show


@dataclass(frozen=True)
class Conf:
    env: tuple[tuple[str, object], ...]
    expr: object

    def lookup(self, x: str):
        for k, v in self.env:
            if k == x:
                return v
        return None


def is_result(c) -> bool:
    return isinstance(c, (Obj, Lam))


def conf(env: tuple, e):
    return e if is_result(e) else Conf(tuple(env), e)


def show_conf(c) -> str:
    if isinstance(c, Conf):
        if not c.env:
            return show(c.expr)
        return "[" + ", ".join(f"{x} = {show(v)}" for x, v in c.env) + "] " + show(c.expr)
    return show(c)


def _dummy(v):
    def nxt(rs):
        return CONCLUDE if rs[-1] == v else REJECT
    return nxt


def _conclude(rs):
    return CONCLUDE


def fjl_semantics(ct: ClassTable, name: str = "fjl") -> SemanticsDef:
    def open_rules(c):
        if not isinstance(c, Conf):
            return []
        env, e = c.env, c.expr
        match e:
            case Var(x):
                v = c.lookup(x)
                return [] if v is None else [start("var", c, v, _dummy(v))]
            case FieldAccess(o, f):
                def fa(rs, f=f):
                    r = rs[0]
                    if not isinstance(r, Obj):
                        return REJECT
                    i = ct.field_index(r.cls, f)
                    if i is None or len(ct.fields(r.cls)) != len(r.vals):
                        return REJECT
                    if len(rs) == 1:
                        return r.vals[i]
                    return CONCLUDE if rs[1] == r.vals[i] else REJECT
                return [start("field-access", c, conf(env, o), fa)]
            case New(cls, args):
                def new(rs, cls=cls, args=args):
                    n = len(args)
                    if len(rs) < n:
                        return conf(env, args[len(rs)])
                    obj = Obj(cls, tuple(rs[:n]))
                    if len(rs) == n:
                        return obj
                    return CONCLUDE if rs[n] == obj else REJECT
                return [start("new", c, conf(env, args[0]) if args else Obj(cls, ()), new)]
            case Invk(o, m, args):
                n = len(args)

                def invk(rs, m=m, args=args, n=n):
                    r0 = rs[0]
                    if len(rs) == 1:
                        mb = ct.mbody(r0.cls, m) if isinstance(r0, Obj) else None
                        if mb is None or len(mb[0]) != n:
                            return REJECT
                    xs, body = ct.mbody(r0.cls, m)
                    if len(rs) <= n:
                        return conf(env, args[len(rs) - 1])
                    if len(rs) == n + 1:
                        return conf(tuple(zip(xs, rs[1:])) + (("this", r0),), body)
                    return CONCLUDE

                def linvk(rs, args=args, n=n):
                    r0 = rs[0]
                    if len(rs) == 1 and not (isinstance(r0, Lam) and len(r0.params) == n):
                        return REJECT
                    if len(rs) <= n:
                        return conf(env, args[len(rs) - 1])
                    if len(rs) == n + 1:
                        return conf(tuple(zip(r0.params, rs[1:])), r0.body)
                    return CONCLUDE

                first = conf(env, o)
                return [start("invk", c, first, invk), start("lambda-invk", c, first, linvk)]
            case Cast(_, x):
                return [start("upcast", c, conf(env, x), _conclude)]
        return []

    return SemanticsDef(name=name, is_result=is_result, open_rules=open_rules, bound=ct.max_arity() + 2,
                        show=show_conf, calculus="fjl")


class FjlTyper:
    """Algorithmic typing: subsumption is folded into argument positions and
    lambdas are accepted only at an exactly matching functional interface."""

    def __init__(self, ct: ClassTable):
        self.ct = ct
        self.synth = lru_cache(maxsize=None)(self._synth)
        self.lam_at = lru_cache(maxsize=None)(self._lam_at)

    def check(self, env: tuple, e, t) -> bool:
        if isinstance(e, Lam):
            return self.lam_at(e, t)
        s = self.synth(env, e)
        return s is not None and self.ct.subtype(s, t)

    def _lam_at(self, lam: Lam, i) -> bool:
        sig = self.ct.functional(i)
        if sig is None or len(sig.params) != len(lam.params) or isinstance(lam.body, Lam):
            return False
        return self.check(tuple(zip(lam.params, sig.params)), lam.body, sig.ret)

    def _synth(self, env: tuple, e):
        ct = self.ct
        match e:
            case Var(x):
                return dict(env).get(x)
            case FieldAccess(o, f):
                t = None if isinstance(o, Lam) else self.synth(env, o)
                if t is None or not ct.is_class(t):
                    return None
                i = ct.field_index(t, f)
                return None if i is None else ct.fields(t)[i][0]
            case New(c, args):
                fs = ct.fields(c)
                if fs is None or len(fs) != len(args):
                    return None
                return c if all(self.check(env, a, t) for a, (t, _) in zip(args, fs)) else None
            case Invk(o, m, args):
                if isinstance(o, Lam):
                    return None
                t0 = self.synth(env, o)
                mt = None if t0 is None else ct.mtype(t0, m)
                if mt is None:
                    return None
                ps, ret = mt[0][0], mt[1]
                if len(ps) != len(args):
                    return None
                return ret if all(self.check(env, a, t) for a, t in zip(args, ps)) else None
            case Cast(t, x):
                return t if self.check(env, x, t) else None
            case Obj(c, vals):
                fs = ct.fields(c)
                if fs is None or len(fs) != len(vals):
                    return None
                return c if all(self.value_leq(v, t) for v, (t, _) in zip(vals, fs)) else None
        return None

    def value_types(self, v) -> list:
        """Types a result has without subsumption."""
        if isinstance(v, Lam):
            return [i for i in sorted(self.ct.interfaces) if self.lam_at(v, i)]
        t = self.synth((), v)
        return [] if t is None else [t]

    def value_leq(self, v, t) -> bool:
        return any(self.ct.subtype(s, t) for s in self.value_types(v))

    def holds(self, t, c) -> bool:
        """The configuration (or result) has a subtype of t."""
        if is_result(c):
            return self.value_leq(c, t)
        choices = [self.value_types(v) for _, v in c.env]
        names = [x for x, _ in c.env]
        for ts in product(*choices):
            if self.check(tuple(zip(names, ts)), c.expr, t):
                return True
        return False


def typecheck_fjl(ct: ClassTable, env: dict, e):
    return FjlTyper(ct).synth(tuple(env.items()), e)


def load_fjl(source: str) -> tuple[ClassTable, object]:
    ct, main = parse_program(source)
    ty = FjlTyper(ct)

    def body_ok(c, m, sig) -> bool:
        env = tuple(zip(m.param_names, sig)) + (("this", c.name),)
        return ty.check(env, m.body, m.ret)

    check_bodies(ct, body_ok)
    return ct, main


def fjl_predicate(ct: ClassTable) -> IndexedPredicate:
    ty = FjlTyper(ct)
    universe = ct.types() + (OBJECT,)
    return IndexedPredicate("fjl-types", ty.holds, lambda c: universe, None, str)
