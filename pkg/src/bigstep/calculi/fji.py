"""Imperative Java-like calculus with a memory of object states.

A configuration pairs a memory with an expression; results have an object
identifier as expression.  The memory is a tuple of object states
(class, field identifiers), and a fresh identifier is the current length.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..kernel import CONCLUDE, REJECT, SemanticsDef, start
from ..soundness import IndexedPredicate
from .fj import (OBJECT, ClassTable, FieldAccess, FieldAssign, Invk, New, Oid, Var, check_bodies, parse_program,
                 show, subst)

Memory = tuple  # tuple[tuple[str, tuple[int, ...]], ...]


@dataclass(frozen=True)
class IConf:
    mem: Memory
    expr: object


def is_result(c) -> bool:
    return isinstance(c, IConf) and isinstance(c.expr, Oid)


def show_mem(mem: Memory) -> str:
    return "{" + ", ".join(f"#{i} = {c}({', '.join(f'#{j}' for j in ids)})" for i, (c, ids) in enumerate(mem)) + "}"


def show_conf(c) -> str:
    if not isinstance(c, IConf):
        return repr(c)
    return show(c.expr) if not c.mem else f"{show_mem(c.mem)} {show(c.expr)}"


def update(mem: Memory, oid: int, i: int, new: int) -> Memory:
    c, ids = mem[oid]
    ids = ids[:i] + (new,) + ids[i + 1:]
    return mem[:oid] + ((c, ids),) + mem[oid + 1:]


def _state(r):
    """(class, ids) of the object a result names, or None."""
    if not is_result(r) or r.expr.n >= len(r.mem):
        return None
    return r.mem[r.expr.n]


def fji_semantics(ct: ClassTable, name: str = "fji") -> SemanticsDef:
    def open_rules(c):
        if not isinstance(c, IConf) or is_result(c):
            return []
        mem, e = c.mem, c.expr
        match e:
            case FieldAccess(o, f):
                def fa(rs, f=f):
                    st = _state(rs[0])
                    if st is None:
                        return REJECT
                    i = ct.field_index(st[0], f)
                    if i is None or len(ct.fields(st[0])) != len(st[1]):
                        return REJECT
                    out = IConf(rs[0].mem, Oid(st[1][i]))
                    if len(rs) == 1:
                        return out
                    return CONCLUDE if rs[1] == out else REJECT
                return [start("field-access", c, IConf(mem, o), fa)]
            case New(cls, args):
                def new(rs, cls=cls, args=args):
                    n = len(args)
                    if len(rs) < n:
                        return IConf(rs[-1].mem, args[len(rs)])
                    last = rs[n - 1].mem if n else mem
                    out = IConf(last + ((cls, tuple(r.expr.n for r in rs[:n])),), Oid(len(last)))
                    if len(rs) == n:
                        return out
                    return CONCLUDE if rs[n] == out else REJECT
                first = IConf(mem, args[0]) if args else IConf(mem + ((cls, ()),), Oid(len(mem)))
                return [start("new", c, first, new)]
            case Invk(o, m, args):
                def invk(rs, m=m, args=args):
                    n = len(args)
                    if len(rs) == 1:
                        st = _state(rs[0])
                        mb = None if st is None else ct.mbody(st[0], m)
                        if mb is None or len(mb[0]) != n:
                            return REJECT
                    if len(rs) <= n:
                        return IConf(rs[-1].mem, args[len(rs) - 1])
                    if len(rs) == n + 1:
                        xs, body = ct.mbody(_state(rs[0])[0], m)
                        s = {**{x: r.expr for x, r in zip(xs, rs[1:])}, "this": rs[0].expr}
                        return IConf(rs[-1].mem, subst(body, s))
                    return CONCLUDE
                return [start("invk", c, IConf(mem, o), invk)]
            case FieldAssign(o, f, v):
                def assign(rs, f=f, v=v):
                    st = _state(rs[0])
                    i = None if st is None else ct.field_index(st[0], f)
                    if i is None or len(ct.fields(st[0])) != len(st[1]):
                        return REJECT
                    if len(rs) == 1:
                        return IConf(rs[0].mem, v)
                    r2 = rs[1]
                    if rs[0].expr.n >= len(r2.mem):
                        return REJECT
                    out = IConf(update(r2.mem, rs[0].expr.n, i, r2.expr.n), r2.expr)
                    if len(rs) == 2:
                        return out
                    return CONCLUDE if rs[2] == out else REJECT
                return [start("field-assign", c, IConf(mem, o), assign)]
        return []

    return SemanticsDef(name=name, is_result=is_result, open_rules=open_rules, bound=ct.max_arity() + 2,
                        show=show_conf, calculus="fji")


class FjiTyper:
    """Class-name typing under a type assignment for object identifiers."""

    def __init__(self, ct: ClassTable):
        self.ct = ct
        self.synth = lru_cache(maxsize=None)(self._synth)
        self.conf_ok = lru_cache(maxsize=None)(self._conf_ok)

    def check(self, env: tuple, sigma: tuple, e, t) -> bool:
        s = self.synth(env, sigma, e)
        return s is not None and self.ct.subtype(s, t)

    def _synth(self, env: tuple, sigma: tuple, e):
        ct = self.ct
        match e:
            case Var(x):
                return dict(env).get(x)
            case Oid(n):
                return dict(sigma).get(n)
            case FieldAccess(o, f):
                d = self.synth(env, sigma, o)
                i = None if d is None else ct.field_index(d, f)
                return None if i is None else ct.fields(d)[i][0]
            case New(c, args):
                fs = ct.fields(c)
                if fs is None or len(fs) != len(args):
                    return None
                return c if all(self.check(env, sigma, a, t) for a, (t, _) in zip(args, fs)) else None
            case Invk(o, m, args):
                t0 = self.synth(env, sigma, o)
                mt = None if t0 is None else ct.mtype(t0, m)
                if mt is None or len(mt[0][0]) != len(args):
                    return None
                ok = all(self.check(env, sigma, a, t) for a, t in zip(args, mt[0][0]))
                return mt[1] if ok else None
            case FieldAssign(o, f, v):
                d = self.synth(env, sigma, o)
                i = None if d is None else ct.field_index(d, f)
                if i is None:
                    return None
                t = ct.fields(d)[i][0]
                return t if self.check(env, sigma, v, t) else None
        return None

    def _conf_ok(self, sigma: tuple, mem: Memory) -> bool:
        """Memory typed by sigma, whose domain must be the memory's."""
        s = dict(sigma)
        if set(s) != set(range(len(mem))):
            return False
        return all(self.check((), sigma, New(c, tuple(Oid(i) for i in ids)), s[k]) for k, (c, ids) in enumerate(mem))

    def extend(self, sigma: tuple, mem: Memory) -> tuple:
        """sigma plus the allocation class of every identifier it does not cover."""
        s = dict(sigma)
        for k, (c, _) in enumerate(mem):
            s.setdefault(k, c)
        return tuple(sorted(s.items()))

    def holds(self, index, c) -> bool:
        """Some extension of sigma types the configuration at the class."""
        sigma, t = index
        if not isinstance(c, IConf) or any(k >= len(c.mem) for k, _ in sigma):
            return False
        # allocation classes are the least choice for the new identifiers
        full = self.extend(sigma, c.mem)
        return self.conf_ok(full, c.mem) and self.check((), full, c.expr, t)


def typecheck_fji(ct: ClassTable, env: dict, sigma: dict, e):
    return FjiTyper(ct).synth(tuple(env.items()), tuple(sorted(sigma.items())), e)


def load_fji(source: str) -> tuple[ClassTable, object]:
    ct, main = parse_program(source)
    ty = FjiTyper(ct)

    def body_ok(c, m, sig) -> bool:
        env = tuple(zip(m.param_names, sig)) + (("this", c.name),)
        return ty.check(env, (), m.body, m.ret)

    check_bodies(ct, body_ok)
    return ct, main


def show_index(index) -> str:
    sigma, t = index
    if not sigma:
        return str(t)
    return f"{t} under {{{', '.join(f'#{k}: {c}' for k, c in sigma)}}}"


def fji_predicate(ct: ClassTable) -> IndexedPredicate:
    ty = FjiTyper(ct)
    classes = tuple(sorted(ct.classes)) + (OBJECT,)

    def universe(c):
        sigma = ty.extend((), c.mem) if isinstance(c, IConf) else ()
        return tuple((sigma, t) for t in classes)

    def oracle(inst, index):
        # the type assignment grows with each premise's memory, left to right
        sigma, _ = index
        out = []
        for k, j in enumerate(inst.premises, 1):
            if k == len(inst.premises):
                out.append(index)
                break
            c = j.config
            if not isinstance(c, IConf):
                return None
            sigma = ty.extend(sigma, c.mem)
            t = ty.synth((), sigma, c.expr)
            if t is None:
                return None
            out.append((sigma, t))
        return out

    return IndexedPredicate("fji-types", ty.holds, universe, oracle, show_index,
                            flags=("S1 index chain extends the type assignment with each premise memory",))
