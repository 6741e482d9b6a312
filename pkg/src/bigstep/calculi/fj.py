"""Shared front end for the Java-like calculi: syntax, parser, printer, class tables.

Source files hold interface and class declarations followed by an optional
main expression.  Lambdas are written `(x, y) -> e`, upcasts `<T> e`, object
identifiers `#n` and object values `C(v, ...)`.  A method may carry extra
parameter-type alternatives, `bool eq(C a, C b) & (D, D) { ... }`, giving it
an intersection type.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .lam import ParseError


# -- expressions ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class FieldAccess:
    obj: "Expr"
    field: str


@dataclass(frozen=True)
class New:
    cls: str
    args: tuple


@dataclass(frozen=True)
class Invk:
    obj: "Expr"
    meth: str
    args: tuple


@dataclass(frozen=True)
class Lam:
    params: tuple[str, ...]
    body: "Expr"


@dataclass(frozen=True)
class Cast:
    type: str
    expr: "Expr"


@dataclass(frozen=True)
class If:
    cond: "Expr"
    then: "Expr"
    else_: "Expr"


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class FieldAssign:
    obj: "Expr"
    field: str
    value: "Expr"


@dataclass(frozen=True)
class Oid:
    n: int


@dataclass(frozen=True)
class Obj:
    """Object value with evaluated fields (runtime only)."""
    cls: str
    vals: tuple


Expr = Var | FieldAccess | New | Invk | Lam | Cast | If | BoolLit | FieldAssign | Oid | Obj

TRUE, FALSE = BoolLit(True), BoolLit(False)
BOOL = "bool"


def children(e: Expr) -> tuple:
    match e:
        case FieldAccess(o, _):
            return (o,)
        case New(_, args) | Obj(_, args):
            return tuple(args)
        case Invk(o, _, args):
            return (o, *args)
        case Lam(_, b):
            return (b,)
        case Cast(_, x):
            return (x,)
        case If(a, b, c):
            return (a, b, c)
        case FieldAssign(o, _, v):
            return (o, v)
    return ()


def subexpressions(e: Expr) -> Iterator[Expr]:
    yield e
    for c in children(e):
        yield from subexpressions(c)


def size(e: Expr) -> int:
    """AST node count."""
    return sum(1 for _ in subexpressions(e))


def free_vars(e: Expr) -> frozenset[str]:
    match e:
        case Var(x):
            return frozenset({x})
        case Lam(ps, b):
            return free_vars(b) - set(ps)
    out: frozenset = frozenset()
    for c in children(e):
        out |= free_vars(c)
    return out


def subst(e: Expr, s: dict) -> Expr:
    """Simultaneous substitution of closed expressions for variables."""
    match e:
        case Var(x):
            return s.get(x, e)
        case FieldAccess(o, f):
            return FieldAccess(subst(o, s), f)
        case New(c, args):
            return New(c, tuple(subst(a, s) for a in args))
        case Obj(c, vals):
            return e
        case Invk(o, m, args):
            return Invk(subst(o, s), m, tuple(subst(a, s) for a in args))
        case Lam(ps, b):
            inner = {k: v for k, v in s.items() if k not in ps}
            return Lam(ps, subst(b, inner)) if inner else e
        case Cast(t, x):
            return Cast(t, subst(x, s))
        case If(a, b, c):
            return If(subst(a, s), subst(b, s), subst(c, s))
        case FieldAssign(o, f, v):
            return FieldAssign(subst(o, s), f, subst(v, s))
    return e


# -- printing ---------------------------------------------------------------------------------

def show_type(t) -> str:
    if isinstance(t, frozenset):
        return " | ".join(sorted(t))
    return str(t)


def show(e: Expr, top: bool = True) -> str:
    match e:
        case Var(x):
            return x
        case FieldAccess(o, f):
            return f"{_postfix(o)}.{f}"
        case New(c, args):
            return f"new {c}({', '.join(show(a) for a in args)})"
        case Obj(c, vals):
            return f"{c}({', '.join(show(a) for a in vals)})"
        case Invk(o, m, args):
            return f"{_postfix(o)}.{m}({', '.join(show(a) for a in args)})"
        case Lam(ps, b):
            s = f"({', '.join(ps)}) -> {show(b)}"
            return s if top else f"({s})"
        case Cast(t, x):
            return f"<{show_type(t)}> {show(x, top)}"
        case If(a, b, c):
            s = f"if {show(a)} then {show(b)} else {show(c)}"
            return s if top else f"({s})"
        case BoolLit(v):
            return "true" if v else "false"
        case FieldAssign(o, f, v):
            s = f"{_postfix(o)}.{f} = {show(v)}"
            return s if top else f"({s})"
        case Oid(n):
            return f"#{n}"
    raise TypeError(e)


def _postfix(e: Expr) -> str:
    if isinstance(e, (Lam, Cast, If, FieldAssign)):
        return f"({show(e)})"
    return show(e)


# -- class tables -------------------------------------------------------------------------------

@dataclass(frozen=True)
class MethodDecl:
    name: str
    ret: object
    params: tuple[tuple[object, str], ...]
    body: Expr
    alts: tuple[tuple[object, ...], ...] = ()
    pos: int = 0

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(x for _, x in self.params)

    @property
    def signatures(self) -> tuple[tuple[object, ...], ...]:
        """Parameter-type tuples of every intersection component, declared one first."""
        return (tuple(t for t, _ in self.params),) + self.alts


@dataclass(frozen=True)
class MethodSig:
    name: str
    ret: object
    params: tuple[object, ...]


@dataclass(frozen=True)
class ClassDecl:
    name: str
    sup: str
    interfaces: tuple[str, ...]
    fields: tuple[tuple[object, str], ...]
    methods: tuple[MethodDecl, ...]
    pos: int = 0


@dataclass(frozen=True)
class InterfaceDecl:
    name: str
    supers: tuple[str, ...]
    methods: tuple[MethodSig, ...]
    pos: int = 0


OBJECT = "Object"


class ClassTableError(ValueError):
    def __init__(self, constraint: str, msg: str, pos: int | None = None):
        where = f" at offset {pos}" if pos is not None else ""
        super().__init__(f"{constraint}: {msg}{where}")
        self.constraint = constraint
        self.pos = pos


@dataclass(frozen=True)
class ClassTable:
    classes: dict = field(default_factory=dict, hash=False, compare=False)
    interfaces: dict = field(default_factory=dict, hash=False, compare=False)
    source: str = ""

    # structural lookups
    def is_class(self, n) -> bool:
        return n == OBJECT or n in self.classes

    def is_interface(self, n) -> bool:
        return n in self.interfaces

    def types(self) -> tuple[str, ...]:
        return tuple(sorted(self.classes)) + tuple(sorted(self.interfaces))

    def fields(self, c: str) -> tuple[tuple[object, str], ...] | None:
        if c == OBJECT:
            return ()
        d = self.classes.get(c)
        if d is None:
            return None
        sup = self.fields(d.sup)
        return None if sup is None else sup + d.fields

    def field_index(self, c: str, f: str) -> int | None:
        fs = self.fields(c)
        if fs:
            for i, (_, name) in enumerate(fs):
                if name == f:
                    return i
        return None

    def method(self, c: str, m: str) -> MethodDecl | None:
        while c in self.classes:
            d = self.classes[c]
            for md in d.methods:
                if md.name == m:
                    return md
            c = d.sup
        return None

    def mbody(self, c: str, m: str) -> tuple[tuple[str, ...], Expr] | None:
        md = self.method(c, m)
        return None if md is None else (md.param_names, md.body)

    def isig(self, i: str, m: str) -> MethodSig | None:
        d = self.interfaces.get(i)
        if d is None:
            return None
        for s in d.methods:
            if s.name == m:
                return s
        for sup in d.supers:
            s = self.isig(sup, m)
            if s is not None:
                return s
        return None

    def mtype(self, t: str, m: str) -> tuple[tuple[tuple[object, ...], ...], object] | None:
        """(intersection components as parameter-type tuples, return type)."""
        if t in self.interfaces:
            s = self.isig(t, m)
            return None if s is None else ((s.params,), s.ret)
        md = self.method(t, m)
        if md is not None:
            return md.signatures, md.ret
        # inherited from an implemented interface (classes must implement them; kept for robustness)
        for i in self.all_interfaces(t):
            s = self.isig(i, m)
            if s is not None:
                return (s.params,), s.ret
        return None

    def all_interfaces(self, c: str) -> list[str]:
        out: list[str] = []
        while c in self.classes:
            for i in self.classes[c].interfaces:
                for j in self.superinterfaces(i):
                    if j not in out:
                        out.append(j)
            c = self.classes[c].sup
        return out

    def superinterfaces(self, i: str) -> list[str]:
        out = [i]
        for s in self.interfaces.get(i, InterfaceDecl(i, (), ())).supers:
            for j in self.superinterfaces(s):
                if j not in out:
                    out.append(j)
        return out

    def supertypes(self, t: str) -> list[str]:
        """All T' with t <= T', t first."""
        if t in self.interfaces:
            return self.superinterfaces(t)
        out = []
        c = t
        while c in self.classes:
            out.append(c)
            c = self.classes[c].sup
        out.append(OBJECT)
        return out + [i for i in self.all_interfaces(t) if i not in out]

    def subtype(self, s, t) -> bool:
        if s == t:
            return True
        if s == BOOL or t == BOOL:
            return False
        return t in self.supertypes(s)

    def functional(self, i: str) -> MethodSig | None:
        """The only method of a functional interface (umtype), else None."""
        if i not in self.interfaces:
            return None
        names = set()
        for j in self.superinterfaces(i):
            names |= {s.name for s in self.interfaces[j].methods}
        if len(names) != 1:
            return None
        return self.isig(i, names.pop())

    def max_arity(self) -> int:
        n = 0
        for d in self.classes.values():
            n = max(n, len(self.fields(d.name) or ()))
            n = max(n, *(len(md.params) for md in d.methods), 0)
        for d in self.interfaces.values():
            n = max(n, *(len(s.params) for s in d.methods), 0)
        return n


# -- parsing ------------------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(//[^\n]*)|(->)|(#\d+)|([A-Za-z_][A-Za-z0-9_]*)|([{}()<>;,.=&|]))")
FJ_KEYWORDS = {"class", "interface", "extends", "implements", "return", "new", "if", "then", "else", "true", "false"}


def tokenize(src: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    end = len(src.rstrip())
    while pos < end:
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            bad = src[pos:].lstrip()[:1]
            raise ParseError(f"unexpected character {bad!r}", len(src) - len(src[pos:].lstrip()))
        pos = m.end()
        if m.lastindex == 1:
            continue
        kind = ["", "arrow", "oid", "ident", "sym"][m.lastindex - 1]
        text = m.group(m.lastindex)
        if kind == "ident" and text in FJ_KEYWORDS:
            kind = "kw"
        toks.append((kind, text, m.start(m.lastindex)))
    toks.append(("eof", "", end))
    return toks


class _Parser:
    def __init__(self, src: str, unions: bool = False):
        self.toks = tokenize(src)
        self.i = 0
        self.unions = unions

    def peek(self, k: int = 0) -> tuple[str, str, int]:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self) -> tuple[str, str, int]:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        k, t, _ = self.peek()
        return t == text and k != "eof"

    def expect(self, text: str) -> int:
        k, t, p = self.take()
        if t != text or k == "eof":
            raise ParseError(f"expected {text!r}, found {t or 'end of input'!r}", p)
        return p

    def ident(self) -> str:
        k, t, p = self.take()
        if k != "ident":
            raise ParseError(f"expected identifier, found {t or 'end of input'!r}", p)
        return t

    # declarations
    def program(self) -> tuple[list, Expr | None]:
        decls = []
        while self.peek()[1] in ("class", "interface") and self.peek()[0] == "kw":
            decls.append(self.decl())
        main = None
        if self.peek()[0] != "eof":
            main = self.expr()
        k, t, p = self.peek()
        if k != "eof":
            raise ParseError(f"unexpected {t!r}", p)
        return decls, main

    def names(self) -> tuple[str, ...]:
        out = [self.ident()]
        while self.at(","):
            self.take()
            out.append(self.ident())
        return tuple(out)

    def type_(self):
        t = self.ident()
        if not self.unions:
            return t
        parts = {t}
        while self.at("|"):
            self.take()
            parts.add(self.ident())
        return frozenset(parts)

    def decl(self):
        k, kw, pos = self.take()
        name = self.ident()
        if kw == "interface":
            supers: tuple = ()
            if self.at("extends"):
                self.take()
                supers = self.names()
            self.expect("{")
            sigs = []
            while not self.at("}"):
                ret = self.type_()
                m = self.ident()
                params = self.params()
                self.expect(";")
                sigs.append(MethodSig(m, ret, tuple(t for t, _ in params)))
            self.expect("}")
            return InterfaceDecl(name, supers, tuple(sigs), pos)
        sup, ifaces = OBJECT, ()
        if self.at("extends"):
            self.take()
            sup = self.ident()
        if self.at("implements"):
            self.take()
            ifaces = self.names()
        self.expect("{")
        fields, methods = [], []
        while not self.at("}"):
            mpos = self.peek()[2]
            ret = self.type_()
            n = self.ident()
            if self.at(";"):
                self.take()
                fields.append((ret, n))
                continue
            params = self.params()
            alts = []
            while self.at("&"):
                self.take()
                self.expect("(")
                ts = [] if self.at(")") else [self.type_()]
                while self.at(","):
                    self.take()
                    ts.append(self.type_())
                self.expect(")")
                alts.append(tuple(ts))
            self.expect("{")
            self.expect("return")
            body = self.expr()
            self.expect(";")
            self.expect("}")
            methods.append(MethodDecl(n, ret, params, body, tuple(alts), mpos))
        self.expect("}")
        return ClassDecl(name, sup, ifaces, tuple(fields), tuple(methods), pos)

    def params(self) -> tuple:
        self.expect("(")
        out = []
        if not self.at(")"):
            out.append((self.type_(), self.ident()))
            while self.at(","):
                self.take()
                out.append((self.type_(), self.ident()))
        self.expect(")")
        return tuple(out)

    # expressions
    def expr(self) -> Expr:
        if self.at("if"):
            self.take()
            a = self.expr()
            self.expect("then")
            b = self.expr()
            self.expect("else")
            return If(a, b, self.expr())
        if self._lambda_ahead():
            return self.lam()
        e = self.unary()
        if self.at("="):
            p = self.take()[2]
            if not isinstance(e, FieldAccess):
                raise ParseError("only a field can be assigned", p)
            return FieldAssign(e.obj, e.field, self.expr())
        return e

    def _lambda_ahead(self) -> bool:
        if not self.at("("):
            return False
        j = 1
        while True:
            k, t, _ = self.peek(j)
            if k != "ident":
                return False
            k, t, _ = self.peek(j + 1)
            if t == ")":
                return self.peek(j + 2)[0] == "arrow"
            if t != ",":
                return False
            j += 2

    def lam(self) -> Expr:
        self.expect("(")
        ps = self.names()
        self.expect(")")
        self.take()  # ->
        return Lam(ps, self.expr())

    def unary(self) -> Expr:
        if self.at("<"):
            self.take()
            t = self.type_()
            self.expect(">")
            if self._lambda_ahead():
                return Cast(t, self.lam())
            return Cast(t, self.unary())
        return self.postfix()

    def postfix(self) -> Expr:
        e = self.primary()
        while self.at("."):
            self.take()
            n = self.ident()
            if self.at("("):
                e = Invk(e, n, self.args())
            else:
                e = FieldAccess(e, n)
        return e

    def args(self) -> tuple:
        self.expect("(")
        out = []
        if not self.at(")"):
            out.append(self.expr())
            while self.at(","):
                self.take()
                out.append(self.expr())
        self.expect(")")
        return tuple(out)

    def primary(self) -> Expr:
        k, t, p = self.take()
        if t == "new" and k == "kw":
            c = self.ident()
            return New(c, self.args())
        if k == "kw" and t in ("true", "false"):
            return BoolLit(t == "true")
        if k == "oid":
            return Oid(int(t[1:]))
        if k == "ident":
            if self.at("("):
                return Obj(t, self.args())
            return Var(t)
        if t == "(" and k == "sym":
            e = self.expr()
            self.expect(")")
            return e
        raise ParseError(f"unexpected {t or 'end of input'!r}", p)


def parse_expr(src: str, unions: bool = False) -> Expr:
    p = _Parser(src, unions)
    e = p.expr()
    k, t, pos = p.peek()
    if k != "eof":
        raise ParseError(f"unexpected {t!r}", pos)
    return e


def parse_program(src: str, unions: bool = False) -> tuple[ClassTable, Expr | None]:
    """Parse declarations and the optional main expression; structural checks only."""
    decls, main = _Parser(src, unions).program()
    classes, interfaces = {}, {}
    for d in decls:
        if d.name in classes or d.name in interfaces or d.name in (OBJECT, BOOL):
            raise ClassTableError("unique names", f"{d.name} declared twice", d.pos)
        (interfaces if isinstance(d, InterfaceDecl) else classes)[d.name] = d
    ct = ClassTable(classes, interfaces, src)
    check_structure(ct)
    return ct, main


def _atoms(t) -> frozenset:
    return t if isinstance(t, frozenset) else frozenset({t})


def check_structure(ct: ClassTable) -> None:
    """Name resolution, acyclicity, no field hiding, no overloading, consistent overriding,
    and classes implementing their interface methods."""
    def known(t, pos, what):
        for a in _atoms(t):
            if not (ct.is_class(a) or ct.is_interface(a) or a == BOOL):
                raise ClassTableError("known types", f"{what} mentions unknown type {a}", pos)

    for i in ct.interfaces.values():
        for s in i.supers:
            if s not in ct.interfaces:
                raise ClassTableError("known types", f"interface {i.name} extends unknown {s}", i.pos)
        names = [m.name for m in i.methods]
        if len(set(names)) != len(names):
            raise ClassTableError("no overloading", f"interface {i.name} repeats a method", i.pos)
        for m in i.methods:
            known(m.ret, i.pos, f"{i.name}.{m.name}")
            for t in m.params:
                known(t, i.pos, f"{i.name}.{m.name}")
    for i in ct.interfaces:
        seen, todo = set(), list(ct.interfaces[i].supers)
        while todo:
            j = todo.pop()
            if j == i:
                raise ClassTableError("acyclic hierarchy", f"interface {i} extends itself", ct.interfaces[i].pos)
            if j not in seen:
                seen.add(j)
                todo.extend(ct.interfaces[j].supers)
        for j in ct.superinterfaces(i)[1:]:
            for m in ct.interfaces[j].methods:
                s = ct.isig(i, m.name)
                if (s.params, s.ret) != (m.params, m.ret):
                    raise ClassTableError("same types in overriding", f"{i}.{m.name} differs from {j}", ct.interfaces[i].pos)

    for c in ct.classes.values():
        if not ct.is_class(c.sup):
            raise ClassTableError("known types", f"class {c.name} extends unknown {c.sup}", c.pos)
        for i in c.interfaces:
            if i not in ct.interfaces:
                raise ClassTableError("known types", f"class {c.name} implements unknown {i}", c.pos)
    for c in ct.classes:
        seen, cur = {c}, ct.classes[c].sup
        while cur in ct.classes:
            if cur in seen:
                raise ClassTableError("acyclic hierarchy", f"class {c} extends itself", ct.classes[c].pos)
            seen.add(cur)
            cur = ct.classes[cur].sup

    for c in ct.classes.values():
        inherited = ct.fields(c.sup) or ()
        names = [f for _, f in inherited]
        for t, f in c.fields:
            known(t, c.pos, f"field {c.name}.{f}")
            if f in names:
                raise ClassTableError("no field hiding", f"{c.name}.{f} redeclared", c.pos)
            names.append(f)
        mnames = [m.name for m in c.methods]
        if len(set(mnames)) != len(mnames):
            raise ClassTableError("no overloading", f"class {c.name} declares a method twice", c.pos)
        for m in c.methods:
            if len(set(m.param_names)) != len(m.param_names) or "this" in m.param_names:
                raise ClassTableError("distinct parameters", f"{c.name}.{m.name}", m.pos)
            known(m.ret, m.pos, f"{c.name}.{m.name}")
            for sig in m.signatures:
                if len(sig) != len(m.params):
                    raise ClassTableError("arity", f"{c.name}.{m.name} alternative has {len(sig)} parameters", m.pos)
                for t in sig:
                    known(t, m.pos, f"{c.name}.{m.name}")
            sup = ct.method(c.sup, m.name)
            if sup is not None and (sup.signatures, sup.ret) != (m.signatures, m.ret):
                raise ClassTableError("same types in overriding", f"{c.name}.{m.name} differs from {c.sup}", m.pos)
        for i in ct.all_interfaces(c.name):
            for s in ct.interfaces[i].methods:
                md = ct.method(c.name, s.name)
                if md is None:
                    raise ClassTableError("interface implemented", f"{c.name} lacks {i}.{s.name}", c.pos)
                if (md.signatures[0], md.ret) != (s.params, s.ret):
                    raise ClassTableError("same types in overriding", f"{c.name}.{s.name} differs from {i}", md.pos)


def check_bodies(ct: ClassTable, body_ok: Callable[[ClassDecl, MethodDecl, tuple], bool]) -> None:
    """Every method body must typecheck against each component of its declared type."""
    for c in ct.classes.values():
        for m in c.methods:
            for sig in m.signatures:
                if not body_ok(c, m, sig):
                    raise ClassTableError("method bodies typecheck",
                                          f"body of {c.name}.{m.name} does not have type {show_type(m.ret)} "
                                          f"for parameters ({', '.join(map(show_type, sig))})", m.pos)
