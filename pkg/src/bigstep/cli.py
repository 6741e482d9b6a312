"""Command line: evaluate, check soundness, cross-check evaluators, verify witnesses."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

from . import pev, wrong
from .enumerate import GenSpec, gen_terms
from .evaluator import Evaluator
from .kernel import SemanticsDef
from .soundness import Bounds, report_json_text, run_suite
from .traces import (Invalid, finite_trace, is_prefix_of_unrolling, periodic_to_json, trace_prefix,
                     verify_divergence_witness, witness_from_json)
from .xcheck import xcheck

LAM_CALCULI = ("lam", "lam-no-succ", "lam-arith")
FJ_CALCULI = ("fjl", "fjo", "fji")

# (calculus, type system) -> named lambda suite
LAM_SUITES = {
    ("lam", "simple"): "simple",
    ("lam", "simple-fool"): "simple-fool",
    ("lam", "union"): "union",
    ("lam-no-succ", "simple"): "no-succ-simple",
    ("lam-arith", "union"): "arith-union",
    ("lam-arith", "union-orE"): "arith-union-orE",
}
XCHECK_TABLES = {"fjl": "fjl_field"}


class UsageError(Exception):
    pass


@dataclass
class Calculus:
    name: str
    sem: SemanticsDef
    parse: Callable[[str], Any]  # one configuration from text
    show: Callable[[Any], str]
    main: Any = None  # configuration of a loaded program's main expression
    ct: Any = None


def _read(arg: str) -> str:
    p = Path(arg)
    if p.suffix in (".lam", ".fj", ".json") and p.is_file():
        return p.read_text()
    return arg


def load_calculus(name: str, text: str | None = None, table: str | None = None) -> Calculus:
    """The semantics and parser of a calculus; for the Java-like calculi a
    program text with classes replaces the built-in table."""
    if name in LAM_CALCULI:
        from .calculi import lam
        sem = {"lam": lam.LAM, "lam-no-succ": lam.LAM_NO_SUCC, "lam-arith": lam.LAM_ARITH}[name]
        return Calculus(name, sem, lam.parse, lam.show, None if text is None else lam.parse(text))
    if name not in FJ_CALCULI:
        raise UsageError(f"unknown calculus {name!r}")
    from .calculi import fj, fj_gen, fji, fjl, fjo
    from .calculi.fj_suites import SEMANTICS
    unions = name == "fjo"
    main = None
    if text is not None and ("class " in text or "interface " in text):
        loader = {"fjl": fjl.load_fjl, "fjo": fjo.load_fjo, "fji": fji.load_fji}[name]
        ct, e = loader(text)
        main = None if e is None else fj_gen.to_config(name, e)
    else:
        ct = fj_gen.default_table(name, table)
        if text is not None:
            main = fj_gen.to_config(name, fj.parse_expr(text, unions))
    sem = SEMANTICS[name](ct)
    return Calculus(name, sem, lambda s: fj_gen.to_config(name, fj.parse_expr(s, unions)), sem.show, main, ct)


def _emit(args, data: dict | list, text: list[str]) -> None:
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print("\n".join(text))


# -- eval ---------------------------------------------------------------------------------------

def _outcome_json(o, show) -> dict:
    if isinstance(o, pev.Converged):
        return {"outcome": "converged", "result": show(o.result), "steps": o.steps}
    if isinstance(o, pev.Stuck):
        return {"outcome": "stuck", "steps": o.steps}
    if isinstance(o, pev.Exhausted):
        return {"outcome": "exhausted", "steps": o.steps}
    if isinstance(o, wrong.Value):
        return {"outcome": "value", "result": show(o.result)}
    if isinstance(o, wrong.Wrong):
        return {"outcome": "wrong", "evidence": _evidence(o.evidence, show)}
    return {"outcome": "exhausted"}


def _evidence(ev, show) -> dict:
    if isinstance(ev, wrong.NoRule):
        return {"kind": "no-rule", "config": show(ev.config)}
    if isinstance(ev, wrong.AllReject):
        return {"kind": "all-reject", "config": show(ev.config), "premise": ev.index, "result": show(ev.result)}
    return {"kind": "propagated", "config": show(ev.config), "premise": ev.index, "cause": _evidence(ev.cause, show)}


def _outcome_line(d: dict) -> str:
    match d["outcome"]:
        case "converged":
            return f"converged to {d['result']} in {d['steps']} steps"
        case "value":
            return f"value {d['result']}"
        case "wrong":
            return "wrong: " + _evidence_line(d["evidence"])
        case k:
            return f"{k} after {d['steps']} steps" if "steps" in d else k


def _evidence_line(e: dict) -> str:
    if e["kind"] == "no-rule":
        return f"no rule for {e['config']}"
    if e["kind"] == "all-reject":
        return f"{e['config']}: premise {e['premise']} result {e['result']} rejected by every rule"
    return f"{e['config']}, premise {e['premise']}: " + _evidence_line(e["cause"])


def cmd_eval(args) -> int:
    cal = load_calculus(args.calculus, _read(args.term))
    if cal.main is None:
        raise UsageError("no expression to evaluate")
    c, show, sem = cal.main, cal.show, cal.sem
    fuel = args.fuel or 10000
    depth = args.depth or 64
    strat = pev.parse_strategy(args.strategy, args.seed)
    ok = True
    data: dict = {"config": show(c), "mode": args.mode}
    lines: list[str] = []
    if args.mode == "standard":
        ev = Evaluator(sem)
        rs = sorted(ev.results(c, depth), key=show)
        data["results"] = [show(r) for r in rs]
        lines.append("results: " + ("{" + ", ".join(data["results"]) + "}" if rs else "none within depth"))
        ok = bool(rs)
        if args.trace:
            data["traces"] = []
            for r in rs:
                tr = [show(x) for x in finite_trace(next(ev.trees(c, depth, r)))]
                data["traces"].append(tr)
                lines.append("trace: [" + ", ".join(tr) + "]")
    elif args.mode == "pev":
        outs = pev.run(sem, c, fuel, strat, log=True)
        outs = outs if isinstance(outs, list) else [outs]
        data["runs"] = []
        for o in outs:
            d = _outcome_json(o, show)
            d["events"] = [{"schema": s.schema, "address": list(s.address), "config": show(s.config),
                            "result": None if s.result is None else show(s.result)} for s in o.log]
            if args.trace:
                d["trace"] = [show(x) for x in trace_prefix(o.tree)]
            data["runs"].append(d)
            for k, s in enumerate(o.log, 1):
                addr = ".".join(map(str, s.address)) or "root"
                res = "" if s.result is None else f" => {show(s.result)}"
                lines.append(f"{k:>4} {s.schema:<14} {addr:<10} {show(s.config)}{res}")
            lines.append(_outcome_line(d))
            if args.trace:
                lines.append("trace: [" + ", ".join(d["trace"]) + "]")
        ok = all(isinstance(o, pev.Converged) for o in outs)
    else:
        outs = wrong.eval_wrong(sem, c, fuel, strat)
        outs = outs if isinstance(outs, list) else [outs]
        data["outcomes"] = [_outcome_json(o, show) for o in outs]
        lines += [_outcome_line(d) for d in data["outcomes"]]
        ok = all(isinstance(o, wrong.Value) for o in outs)
    _emit(args, data, lines)
    return 1 if args.strict and not ok else 0


# -- check ---------------------------------------------------------------------------------------

def _suite(args):
    if args.calculus in LAM_CALCULI:
        from .calculi.lam_suites import lam_suite
        key = (args.calculus, args.typesystem or "simple")
        if key not in LAM_SUITES:
            known = ", ".join(f"{a} {b}" for a, b in LAM_SUITES)
            raise UsageError(f"no type system {key[1]!r} for {key[0]}; known: {known}")
        return lam_suite(LAM_SUITES[key], exhaustive_size=args.size or 6, random_count=args.count or 0,
                         seed=args.seed)
    if args.calculus not in FJ_CALCULI:
        raise UsageError(f"unknown calculus {args.calculus!r}")
    from .calculi.fj_suites import fj_suite
    ct = None
    if args.typesystem and args.typesystem != "types":
        ct = load_calculus(args.calculus, _read(args.typesystem)).ct
    return fj_suite(args.calculus, ct, exhaustive_size=args.size, random_count=args.count or 0, seed=args.seed)


def cmd_check(args) -> int:
    suite = _suite(args)
    b = Bounds(eval_depth=args.depth or 32, random_seed=args.seed)
    rep = run_suite(suite, b, fuel=args.fuel or 2000)
    show, show_index = suite.sem.show, suite.predicate.show_index
    if args.json:
        print(report_json_text(rep, show, show_index))
    else:
        j = rep.to_json(show, show_index, timestamp=False)
        print(f"{rep.suite} [{rep.predicate}]: {rep.configs} configurations")
        for cond in j["conditions"]:
            t = cond["tally"]
            print(f"  {cond['condition']:<13} {cond['status']:<12} pass {t['pass']}, fail {t['fail']}, "
                  f"inconclusive {t['inconclusive']}")
            for cx in cond["counterexamples"][:1]:
                print("    counterexample: " + json.dumps(cx, sort_keys=True))
        if "runtime" in j:
            r = j["runtime"]
            print(f"  runtime       converged {r['converged']}, exhausted {r['exhausted']}, "
                  f"stuck {len(r['stuck'])}, wrong {len(r['wrong'])}")
        for f in j["flags"]:
            print(f"  note: {f}")
    bad = not rep.ok or (args.strict and any(t.inconclusive for t in rep.tallies.values()))
    return 1 if bad else 0


# -- xcheck --------------------------------------------------------------------------------------

def cmd_xcheck(args) -> int:
    name = args.calculus
    if name in FJ_CALCULI:
        from .calculi.fj_gen import fj_generator
        text = _read(args.table) if args.table else None
        cal = load_calculus(name, text, None if text else XCHECK_TABLES.get(name))
        size = args.size or 6
        corpus = gen_terms(GenSpec(name, size), gen=fj_generator(name, cal.ct))
    elif name in LAM_CALCULI:
        cal = load_calculus(name)
        size = args.size or 7
        corpus = gen_terms(GenSpec(name, size))
    else:
        raise UsageError(f"unknown calculus {name!r}")
    rep = xcheck(cal.sem, corpus, depth=args.depth or 50, fuel=args.fuel or 500, workers=args.workers,
                name=f"{name} size<={size}")
    if args.json:
        print(json.dumps(rep.to_json(cal.show), indent=2, sort_keys=True))
    else:
        print(f"{rep.name}: {rep.configs} configurations, depth {rep.bounds['depth']}, fuel {rep.bounds['fuel']}, "
              f"strategy all")
        for k, v in rep.tally().items():
            print(f"  {k:<12} {'agree' if not v else f'{v} disagreements'}")
        for d in rep.disagreements[:10]:
            print(f"  {d.check}: {cal.show(d.config)}: {d.detail}")
    return 0 if rep.ok else 1


# -- witness -------------------------------------------------------------------------------------

def pev_matches(sem: SemanticsDef, c, periodic, fuel: int, budget: int = 64) -> tuple[bool, str]:
    """Some partial-evaluation run of c stays unstuck and visits the periodic trace."""
    runs = pev.run(sem, c, fuel, pev.All(budget))
    for o in runs:
        if isinstance(o, pev.Stuck):
            continue
        pre = trace_prefix(o.tree)
        if is_prefix_of_unrolling(pre, periodic):
            return True, f"{len(pre)} configurations match"
    if all(isinstance(o, pev.Stuck) for o in runs):
        return False, "every run is stuck"
    return False, "no unstuck run follows the periodic trace"


def cmd_witness(args) -> int:
    cal = load_calculus(args.calculus)
    try:
        w = witness_from_json(_read(args.file), cal.parse)
    except ValueError as e:
        raise UsageError(str(e)) from None
    depth = args.depth or 64
    got = verify_divergence_witness(cal.sem, w, depth)
    show = cal.show
    if isinstance(got, Invalid):
        data = {"status": "Invalid", "reason": got.reason, "depth_limited": got.depth_limited}
        _emit(args, data, [f"Invalid: {got.reason}"])
        return 1
    data = {"status": "Valid", "members": []}
    lines = ["Valid"]
    ok = True
    for c, p in got.traces:
        agree, why = pev_matches(cal.sem, c, p, args.fuel or 10000)
        ok &= agree
        data["members"].append({"config": show(c), **periodic_to_json(p, show), "pev": {"agrees": agree, "detail": why}})
        lines.append(f"  {show(c)}: prefix [{', '.join(map(show, p.prefix))}] cycle [{', '.join(map(show, p.cycle))}]")
        lines.append(f"    pev: {'agrees' if agree else 'DISAGREES'} ({why})")
    _emit(args, data, lines)
    return 0 if ok else 1


# -- entry ---------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--calculus", default=None, choices=LAM_CALCULI + FJ_CALCULI)
    common.add_argument("--mode", default="standard", choices=("standard", "pev", "wrong"))
    common.add_argument("--fuel", type=int, default=None, help="step budget (eval 10000, check 2000, xcheck 500)")
    common.add_argument("--depth", type=int, default=None, help="derivation depth (eval 64, check 32, xcheck 50)")
    common.add_argument("--strategy", default="first", choices=("first", "random", "all"))
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--size", type=int, default=None, help="exhaustive corpus size")
    common.add_argument("--count", type=int, default=None, help="random corpus size")
    common.add_argument("--json", action="store_true")
    common.add_argument("--strict", action="store_true", help="non-convergence or inconclusive checks fail")
    common.add_argument("--trace", action="store_true")

    p = argparse.ArgumentParser(prog="bigstep", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)
    e = sub.add_parser("eval", parents=[common], help="evaluate a term or the main expression of a program")
    e.add_argument("term", help="term text, .lam file or .fj program")
    c = sub.add_parser("check", parents=[common], help="run a soundness suite")
    c.add_argument("calc", metavar="calculus", choices=LAM_CALCULI + FJ_CALCULI)
    c.add_argument("typesystem", nargs="?", help="type system, or a .fj class table for the Java-like calculi")
    x = sub.add_parser("xcheck", parents=[common], help="cross-check the evaluators on an enumerated corpus")
    x.add_argument("calc", metavar="calculus", choices=LAM_CALCULI + FJ_CALCULI)
    x.add_argument("table", nargs="?", help=".fj class table for the Java-like calculi")
    x.add_argument("--workers", type=int, default=1, help="worker processes (fork)")
    w = sub.add_parser("witness", parents=[common], help="verify a divergence witness file")
    w.add_argument("file")
    return p


def main(argv: list[str] | None = None) -> int:
    p = build_parser()
    try:
        args = p.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    if getattr(args, "calc", None):
        if args.calculus and args.calculus != args.calc:
            print("error: conflicting calculus arguments", file=sys.stderr)
            return 2
        args.calculus = args.calc
    if args.cmd == "eval" and args.calculus is None and Path(args.term).suffix == ".fj":
        print("error: choose --calculus fjl, fjo or fji for a .fj program", file=sys.stderr)
        return 2
    args.calculus = args.calculus or "lam"
    handler = {"eval": cmd_eval, "check": cmd_check, "xcheck": cmd_xcheck, "witness": cmd_witness}[args.cmd]
    try:
        return handler(args)
    except (UsageError, ValueError, SyntaxError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
