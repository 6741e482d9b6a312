"""Deterministic generation of configurations.

Exhaustive mode lists every term up to a size in a fixed order (by size, then
construction order).  Random mode draws terms from a seeded generator.  Each
calculus registers a `Generator` giving both modes.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import islice
from typing import Any, Callable, Iterator, Sequence

from .calculi.lam import Abs, App, Choice, Const, LamExpr, Plus, Succ, Var
from .calculi.lam import size as lam_size


@dataclass(frozen=True)
class Exhaustive:
    pass


@dataclass(frozen=True)
class Random:
    count: int
    seed: int = 0


@dataclass(frozen=True)
class GenSpec:
    calculus: str
    max_size: int
    mode: Exhaustive | Random = Exhaustive()
    closed: bool = True
    min_size: int = 1


@dataclass(frozen=True)
class Generator:
    exhaustive: Callable[[int, int], Iterator[Any]]  # (min_size, max_size)
    random: Callable[[random.Random, int], Any]  # (rng, max_size) -> one term
    size: Callable[[Any], int]


GENERATORS: dict[str, Callable[[], Generator]] = {}


def register(name: str):
    def deco(fn):
        GENERATORS[name] = fn
        return fn
    return deco


def generator(calculus: str) -> Generator:
    if calculus not in GENERATORS:
        from .calculi import fj_gen  # noqa: F401  (registers the Java-like calculi)
    try:
        return GENERATORS[calculus]()
    except KeyError:
        raise ValueError(f"no generator for calculus {calculus!r}") from None


def gen_terms(g: GenSpec, gen: Generator | None = None) -> list:
    if g.max_size < 1:
        raise ValueError("size must be at least 1")
    gen = gen or generator(g.calculus)
    match g.mode:
        case Exhaustive():
            out, seen = [], set()
            for t in gen.exhaustive(g.min_size, g.max_size):
                if t not in seen:
                    seen.add(t)
                    out.append(t)
            return out
        case Random(count, seed):
            rng = random.Random(seed)
            return [gen.random(rng, g.max_size) for _ in range(count)]
    raise TypeError(g.mode)


def gen_welltyped(g: GenSpec, P, per_config: int = 1, attempts: int = 200,
                  gen: Generator | None = None) -> list[tuple[Any, Any]]:
    """(configuration, index) pairs satisfying P.  In random mode, draws until
    `count` distinct well-typed configurations are found (or attempts run out)."""
    def indexes(c):
        return list(islice((i for i in P.index_universe(c) if P.holds(i, c)), per_config))

    out = []
    gen = gen or generator(g.calculus)
    if isinstance(g.mode, Random):
        rng = random.Random(g.mode.seed)
        seen: set = set()
        for _ in range(g.mode.count * attempts):
            if len(seen) >= g.mode.count:
                break
            c = gen.random(rng, g.max_size)
            if c in seen:
                continue
            got = indexes(c)
            if got:
                seen.add(c)
                out += [(c, i) for i in got]
        return out
    for c in gen_terms(g, gen):
        out += [(c, i) for i in indexes(c)]
    return out


# -- lambda-calculus ---------------------------------------------------------------------

BINDERS = ("x", "y", "z", "w", "u", "v")


def binder(d: int) -> str:
    return BINDERS[d] if d < len(BINDERS) else f"x{d}"


@dataclass(frozen=True)
class LamShape:
    consts: tuple[int, ...] = (0, 1)
    lam: bool = True
    succ: bool = True
    choice: bool = True
    plus: bool = False


@lru_cache(maxsize=None)
def _lam_exact(shape: LamShape, s: int, d: int) -> tuple[LamExpr, ...]:
    """Closed-under-d-binders terms of exactly size s."""
    out: list[LamExpr] = []
    if s == 0:
        return tuple(Var(binder(i)) for i in range(d))
    if s == 1:
        out += [Const(n) for n in shape.consts]
    if shape.lam and s >= 2:
        x = binder(d)
        out += [Abs(x, b) for b in _lam_exact(shape, s - 2, d + 1)]
    if shape.succ and s >= 1:
        out += [Succ(a) for a in _lam_exact(shape, s - 1, d)]
    binaries = [App] if shape.lam else []
    if shape.choice:
        binaries.append(Choice)
    if shape.plus:
        binaries.append(Plus)
    for k in binaries:
        for i in range(0, s):
            for a in _lam_exact(shape, i, d):
                for b in _lam_exact(shape, s - 1 - i, d):
                    out.append(k(a, b))
    return tuple(out)


def lam_exhaustive(shape: LamShape, lo: int, hi: int) -> Iterator[LamExpr]:
    for s in range(max(lo, 1), hi + 1):
        yield from _lam_exact(shape, s, 0)


def lam_random(shape: LamShape, rng: random.Random, max_size: int) -> LamExpr:
    target = rng.randint(1, max_size)

    def go(s: int, d: int) -> LamExpr:
        # smallest subterm under d binders: a variable is free, a constant costs 1
        lo = 0 if d else 1
        if s <= lo:
            return Var(binder(rng.randrange(d))) if d else Const(rng.choice(shape.consts))
        opts = []
        if s == 1:
            opts.append("const")
        if s >= 2 and shape.lam:
            opts.append("abs")
        if s - 1 >= 2 * lo and shape.lam:
            opts += ["app", "app"]
        if s - 1 >= lo and shape.succ:
            opts.append("succ")
        if s - 1 >= max(2 * lo, 1) and shape.choice:
            opts.append("choice")
        if s - 1 >= max(2 * lo, 1) and shape.plus:
            opts.append("plus")
        if not opts:
            opts.append("const")
        k = rng.choice(opts)
        if k == "const":
            return Const(rng.choice(shape.consts))
        if k == "abs":
            return Abs(binder(d), go(s - 2, d + 1))
        if k == "succ":
            return Succ(go(s - 1, d))
        i = rng.randint(lo, s - 1 - lo)
        a, b = go(i, d), go(s - 1 - i, d)
        return {"app": App, "choice": Choice, "plus": Plus}[k](a, b)

    return go(target, 0)


def _lam_generator(shape: LamShape) -> Generator:
    return Generator(lambda lo, hi: lam_exhaustive(shape, lo, hi),
                     lambda rng, n: lam_random(shape, rng, n), lam_size)


register("lam")(lambda: _lam_generator(LamShape()))
register("lam-no-succ")(lambda: _lam_generator(LamShape()))
register("lam-arith")(lambda: _lam_generator(LamShape(consts=(1, 2), lam=False, plus=True)))


def canonical_order(configs: Sequence, size: Callable[[Any], int], show: Callable[[Any], str] = repr) -> list:
    return sorted(configs, key=lambda c: (size(c), show(c)))
