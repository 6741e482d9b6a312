"""Soundness suites for the Java-like calculi."""
from __future__ import annotations

from ..enumerate import GenSpec, Random, gen_welltyped
from ..soundness import Suite
from . import fji, fjl, fjo
from .fj import FALSE, TRUE, ClassTable, Lam, New, Obj, Var, free_vars, subexpressions
from .fj_gen import config_expr, config_size, default_table, fj_generator

SEMANTICS = {"fjl": fjl.fjl_semantics, "fjo": fjo.fjo_semantics, "fji": fji.fji_semantics}
PREDICATES = {"fjl": fjl.fjl_predicate, "fjo": fjo.fjo_predicate, "fji": fji.fji_predicate}


def sample_objects(ct: ClassTable, make, depth: int = 2) -> list:
    """Small objects of every class whose fields can be filled from earlier samples."""
    out: list = []
    for _ in range(depth):
        for c in sorted(ct.classes):
            fs = ct.fields(c)
            vals = []
            for t, _f in fs:
                v = next((o for o in out if _class_of(o) and ct.subtype(_class_of(o), t)), None)
                if v is None:
                    break
                vals.append(v)
            else:
                o = make(c, tuple(vals))
                if o not in out:
                    out.append(o)
    return out


def _class_of(v):
    return v.cls if isinstance(v, (Obj, New)) else None


def make_pool(calculus: str, ct: ClassTable):
    if calculus == "fjl":
        vals = sample_objects(ct, Obj) + [Lam(("x",), Var("x")), Lam(("x", "y"), Var("y"))]
        return lambda c: vals
    if calculus == "fjo":
        vals = [TRUE, FALSE] + sample_objects(ct, New)
        return lambda c: vals

    def pool(c):
        # identifiers already allocated, then one fresh object of each field-less class
        mem = c.mem if isinstance(c, fji.IConf) else ()
        out = [fji.IConf(mem, fji.Oid(i)) for i in range(len(mem))]
        out += [fji.IConf(mem + ((k, ()),), fji.Oid(len(mem))) for k in sorted(ct.classes) if not ct.fields(k)]
        return out
    return pool


def make_subconfigs(calculus: str):
    def sub(c):
        e = config_expr(c)
        out = []
        for s in subexpressions(e):
            if s == e or free_vars(s) or (calculus == "fjl" and isinstance(s, Lam)):
                continue
            if calculus == "fjl":
                out.append(fjl.conf(c.env if isinstance(c, fjl.Conf) else (), s))
            elif calculus == "fji":
                out.append(fji.IConf(c.mem, s))
            else:
                out.append(s)
        return out
    return sub


DEFAULT_SIZES = {"fjl": 4, "fjo": 6, "fji": 6}


def fj_suite(calculus: str, ct: ClassTable | None = None, exhaustive_size: int | None = None,
             random_count: int = 0, random_size: int = 14, seed: int = 0) -> Suite:
    if calculus not in SEMANTICS:
        raise ValueError(f"unknown calculus {calculus!r}")
    ct = ct or default_table(calculus)
    sem, P = SEMANTICS[calculus](ct), PREDICATES[calculus](ct)
    n = DEFAULT_SIZES[calculus] if exhaustive_size is None else exhaustive_size
    gen = fj_generator(calculus, ct)

    def corpus():
        out = gen_welltyped(GenSpec(calculus, n), P, gen=gen)
        if random_count:
            out += gen_welltyped(GenSpec(calculus, random_size, Random(random_count, seed)), P, gen=gen)
        return out

    return Suite(f"{sem.name}/{P.name}", sem, P, corpus, pool=make_pool(calculus, ct),
                 subconfigs=make_subconfigs(calculus), size=config_size)

