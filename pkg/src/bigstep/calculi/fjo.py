"""Java-like calculus with intersection method types and union expression types.

Configurations are closed expressions and values are objects built from
values, or booleans.  Types are finite unions of class names and bool, kept
as frozensets; a method type is the intersection of its parameter-type
alternatives.  A call may pass the same expression in its last p positions
and type it by a union, one intersection component per union member.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from ..kernel import CONCLUDE, REJECT, SemanticsDef, start
from ..soundness import IndexedPredicate
from .fj import (BOOL, FALSE, OBJECT, TRUE, BoolLit, ClassTable, FieldAccess, If, Invk, New, Var, check_bodies,
                 parse_program, show, show_type, subst)


def is_value(e) -> bool:
    if isinstance(e, BoolLit):
        return True
    return isinstance(e, New) and all(is_value(a) for a in e.args)


def atoms(t) -> frozenset:
    return t if isinstance(t, frozenset) else frozenset({t})


def _dummy(v):
    def nxt(rs):
        return CONCLUDE if rs[-1] == v else REJECT
    return nxt


def fjo_semantics(ct: ClassTable, name: str = "fjo") -> SemanticsDef:
    def open_rules(c):
        if is_value(c):
            return []
        match c:
            case FieldAccess(o, f):
                def fa(rs, f=f):
                    r = rs[0]
                    if not (isinstance(r, New) and is_value(r)):
                        return REJECT
                    i = ct.field_index(r.cls, f)
                    if i is None or len(ct.fields(r.cls)) != len(r.args):
                        return REJECT
                    if len(rs) == 1:
                        return r.args[i]
                    return CONCLUDE if rs[1] == r.args[i] else REJECT
                return [start("field-access", c, o, fa)]
            case New(cls, args):
                def new(rs, cls=cls, args=args):
                    n = len(args)
                    if len(rs) < n:
                        return args[len(rs)]
                    obj = New(cls, tuple(rs[:n]))
                    if len(rs) == n:
                        return obj
                    return CONCLUDE if rs[n] == obj else REJECT
                return [start("new", c, args[0], new)]
            case Invk(o, m, args):
                def invk(rs, m=m, args=args):
                    n = len(args)
                    r0 = rs[0]
                    if len(rs) == 1:
                        mb = ct.mbody(r0.cls, m) if isinstance(r0, New) else None
                        if mb is None or len(mb[0]) != n:
                            return REJECT
                    if len(rs) <= n:
                        return args[len(rs) - 1]
                    if len(rs) == n + 1:
                        xs, body = ct.mbody(r0.cls, m)
                        return subst(body, {**dict(zip(xs, rs[1:])), "this": r0})
                    return CONCLUDE
                return [start("invk", c, o, invk)]
            case If(cond, e1, e2):
                def branch(want, e):
                    def nxt(rs):
                        if len(rs) == 1:
                            return e if rs[0] == want else REJECT
                        return CONCLUDE
                    return nxt
                return [start("if-true", c, cond, branch(TRUE, e1)), start("if-false", c, cond, branch(FALSE, e2))]
        return []

    return SemanticsDef(name=name, is_result=is_value, open_rules=open_rules, bound=ct.max_arity() + 2,
                        show=show, calculus="fjo")


class FjoTyper:
    """Minimal-type synthesis; subsumption is checked where a rule needs a given type."""

    def __init__(self, ct: ClassTable):
        self.ct = ct
        self.synth = lru_cache(maxsize=None)(self._synth)
        self.classes = tuple(sorted(ct.classes)) + (OBJECT,)

    def sub(self, s, t) -> bool:
        """Unions as sets: every member of s is below some member of t."""
        return all(any(self.ct.subtype(a, b) for b in atoms(t)) for a in atoms(s))

    def check(self, env: tuple, e, t) -> bool:
        s = self.synth(env, e)
        return s is not None and self.sub(s, t)

    def _receiver(self, t, has) -> str | None:
        """A class above t with the wanted member; overriding keeps member types fixed."""
        for c in self.classes:
            if has(c) and self.sub(t, c):
                return c
        return None

    def _synth(self, env: tuple, e):
        ct = self.ct
        match e:
            case Var(x):
                t = dict(env).get(x)
                return None if t is None else atoms(t)
            case BoolLit():
                return frozenset({BOOL})
            case FieldAccess(o, f):
                t = self.synth(env, o)
                c = None if t is None else self._receiver(t, lambda c: ct.field_index(c, f) is not None)
                if c is None:
                    return None
                return atoms(ct.fields(c)[ct.field_index(c, f)][0])
            case New(c, args):
                fs = ct.fields(c)
                if fs is None or len(fs) != len(args):
                    return None
                ok = all(self.check(env, a, t) for a, (t, _) in zip(args, fs))
                return frozenset({c}) if ok else None
            case Invk(o, m, args):
                t0 = self.synth(env, o)
                c0 = None if t0 is None else self._receiver(t0, lambda c: ct.mtype(c, m) is not None)
                if c0 is None:
                    return None
                comps, ret = ct.mtype(c0, m)
                tys = [self.synth(env, a) for a in args]
                if any(t is None for t in tys):
                    return None
                return atoms(ret) if self._invk_fits(comps, args, tys) else None
            case If(cond, e1, e2):
                if not self.check(env, cond, BOOL):
                    return None
                t1, t2 = self.synth(env, e1), self.synth(env, e2)
                return None if t1 is None or t2 is None else t1 | t2
        return None

    def _invk_fits(self, comps, args, tys) -> bool:
        """Search the split into q distinct arguments and p copies of one expression."""
        n = len(args)
        for p in range(0, n + 1):
            q = n - p
            if p and any(a != args[q] for a in args[q:]):
                continue
            for comp in comps:
                if len(comp) != n:
                    continue
                prefix = comp[:q]
                if not all(self.sub(tys[j], prefix[j]) for j in range(q)):
                    continue
                if p == 0:
                    return True
                if len(set(comp[q:])) != 1:
                    continue
                ds = frozenset()
                for k in comps:
                    if len(k) == n and k[:q] == prefix and len(set(k[q:])) == 1:
                        ds |= atoms(k[q])
                if self.sub(tys[q], ds):
                    return True
        return False


def typecheck_fjo(ct: ClassTable, env: dict, e):
    return FjoTyper(ct).synth(tuple(env.items()), e)


def load_fjo(source: str) -> tuple[ClassTable, object]:
    ct, main = parse_program(source, unions=True)
    ty = FjoTyper(ct)

    def body_ok(c, m, sig) -> bool:
        env = tuple(zip(m.param_names, sig)) + (("this", c.name),)
        return ty.check(env, m.body, m.ret)

    check_bodies(ct, body_ok)
    return ct, main


def type_universe(ct: ClassTable, width: int = 2) -> tuple:
    base = tuple(sorted(ct.classes)) + (OBJECT, BOOL)
    out = [frozenset({a}) for a in base]
    for k in range(2, width + 1):
        out += [frozenset(c) for c in combinations(base, k)]
    return tuple(out)


def fjo_predicate(ct: ClassTable) -> IndexedPredicate:
    ty = FjoTyper(ct)
    universe = type_universe(ct)
    return IndexedPredicate("fjo-types", lambda t, c: ty.check((), c, t), lambda c: universe, None, show_type)
