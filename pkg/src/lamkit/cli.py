"""Command-line interface.

Exit status: 0 on success, 1 when a check or suite fails (or a budget runs
out), 2 on usage, parse or input-format errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import cbn
from .corpus import CorpusSpec
from .delta import EMPTY_DELTA
from .notation import ParseError, parse_term, print_term
from .serialize import (
    derivation_to_json,
    dumps,
    load_delta,
    srs_from_json,
    srs_to_json,
    term_to_json,
    trace_from_json,
    trace_to_json,
)
from .terms import alpha_key


class UsageError(Exception):
    pass


class _Calc:
    """The operations of one calculus behind a common face."""

    def __init__(self, name: str, delta_path: Optional[str]):
        self.name = name
        if name == "cbn":
            self.delta = load_delta(delta_path) if delta_path else EMPTY_DELTA
            self.step = cbn.step_cbn
            self.step_left = cbn.step_left
            self.left_path = cbn.left_path
            self.cdev = cbn.cdev
            self.cdev_derivation = cbn.cdev_derivation
            self.trace_to_chain = cbn.trace_to_chain
            self.join = cbn.join_multi
            self.standardize = cbn.standardize
            self.is_srs = cbn.is_srs
            self.srs_to_trace = cbn.srs_to_trace
            self.key = alpha_key
        else:
            from . import cbv
            from .cbv.syntax import EMPTY_DELTA_V, alpha_key_v

            self.delta = load_delta(delta_path, cbv=True) if delta_path else EMPTY_DELTA_V
            self.step = cbv.step_cbv
            self.step_left = cbv.step_left_cbv
            self.left_path = cbv.left_path_cbv
            self.cdev = cbv.cdev_cbv
            self.cdev_derivation = cbv.cdev_derivation_v
            self.trace_to_chain = cbv.trace_to_chain_v
            self.join = cbv.join_multi_cbv
            self.standardize = cbv.standardize_cbv
            self.is_srs = cbv.is_srs_cbv
            self.srs_to_trace = cbv.srs_to_trace_cbv
            self.key = alpha_key_v

    def parse(self, text: str):
        t = parse_term(text)
        if self.name == "cbv":
            from .cbv.syntax import from_unsorted

            return from_unsorted(t)
        return t

    def find_trace(self, source, target, bound: int) -> Optional[cbn.Trace]:
        """A shortest trace from ``source`` to ``target`` with at most ``bound`` steps."""
        goal = self.key(target)
        frontier = [(source, ())]
        seen = {self.key(source)}
        for n in range(bound + 1):
            for t, steps in frontier:
                if self.key(t) == goal:
                    return cbn.Trace(source, steps)
            if n == bound:
                break
            nxt = []
            for t, steps in frontier:
                for path, u in self.step(t, self.delta):
                    k = self.key(u)
                    if k not in seen:
                        seen.add(k)
                        nxt.append((u, steps + ((path, u),)))
            frontier = nxt
        return None


def _show(t) -> str:
    return print_term(t)


def _emit(args, text: str, obj) -> None:
    print(dumps(obj) if args.json else text)


def _needs_cbn(args, what: str) -> None:
    if args.calculus != "cbn":
        raise UsageError(f"{what} is only defined for the call-by-name calculus")


# -- commands --------------------------------------------------------------------

def cmd_parse(args, calc: _Calc) -> int:
    t = calc.parse(args.term)
    style = "json" if args.json else args.style
    print(print_term(t, style))
    return 0


def cmd_reduce(args, calc: _Calc) -> int:
    t, n = calc.parse(args.term), 0
    while n < args.max_steps:
        nxt = calc.step_left(t, calc.delta)
        if nxt is None:
            break
        t, n = nxt, n + 1
    done = calc.step_left(t, calc.delta) is None
    _emit(args, _show(t), {"term": term_to_json(t), "steps": n, "stopped": done})
    if not done:
        print(f"stopped after {n} steps without reaching a left-normal term", file=sys.stderr)
    return 0 if done else 1


def cmd_trace(args, calc: _Calc) -> int:
    t = calc.parse(args.term)
    steps = []
    while len(steps) < args.max_steps:
        path = calc.left_path(t, calc.delta)
        if path is None:
            break
        t = calc.step_left(t, calc.delta)
        steps.append((path, t))
    tr = cbn.Trace(calc.parse(args.term), tuple(steps))
    lines = [_show(tr.start)] + [f"  --{p}--> {_show(u)}" for p, u in tr.steps]
    _emit(args, "\n".join(lines), trace_to_json(tr))
    return 0 if calc.left_path(tr.end, calc.delta) is None else 1


def cmd_cdev(args, calc: _Calc) -> int:
    t = calc.parse(args.term)
    if args.json:
        d = calc.cdev_derivation(t, calc.delta)
        print(dumps({"target": term_to_json(d.target), "derivation": derivation_to_json(d)}))
    else:
        print(_show(calc.cdev(t, calc.delta)))
    return 0


def _trace_or_fail(calc: _Calc, source, target, bound: int, what: str):
    tr = calc.find_trace(source, target, bound)
    if tr is None:
        raise LookupError(f"{what} is not reachable within {bound} steps")
    return tr


def cmd_join(args, calc: _Calc) -> int:
    x, y1, y2 = calc.parse(args.term), calc.parse(args.left), calc.parse(args.right)
    try:
        c1 = calc.trace_to_chain(_trace_or_fail(calc, x, y1, args.max_steps, "the first term"), calc.delta)
        c2 = calc.trace_to_chain(_trace_or_fail(calc, x, y2, args.max_steps, "the second term"), calc.delta)
    except LookupError as e:
        print(str(e), file=sys.stderr)
        return 1
    z, e1s, e2s = calc.join(x, c1, c2, calc.delta)
    text = "\n".join(
        [f"join: {_show(z)}"]
        + [f"  left  => {_show(e.target)} (label {e.label})" for e in e1s]
        + [f"  right => {_show(e.target)} (label {e.label})" for e in e2s]
    )
    obj = {
        "join": term_to_json(z),
        "left": [derivation_to_json(e) for e in e1s],
        "right": [derivation_to_json(e) for e in e2s],
    }
    _emit(args, text, obj)
    return 0


def cmd_standardize(args, calc: _Calc) -> int:
    cbv = calc.name == "cbv"
    if args.trace_file:
        with open(args.trace_file, encoding="utf-8") as fh:
            tr = trace_from_json(json.load(fh), cbv)
    else:
        if args.term is None or args.target is None:
            raise UsageError("standardize needs a start and a target term, or --trace-file")
        try:
            tr = _trace_or_fail(calc, calc.parse(args.term), calc.parse(args.target), args.max_steps, "the target")
        except LookupError as e:
            print(str(e), file=sys.stderr)
            return 1
    chain = calc.trace_to_chain(tr, calc.delta)
    xs = calc.standardize(chain, calc.delta, start=tr.start)
    _emit(args, "\n".join(_show(u) for u in xs), srs_to_json(xs))
    return 0


def cmd_check_srs(args, calc: _Calc) -> int:
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            xs = srs_from_json(json.load(fh), calc.name == "cbv")
    elif args.terms:
        xs = [calc.parse(s) for s in args.terms]
    else:
        raise UsageError("check-srs needs terms or --file")
    ok = calc.is_srs(xs, calc.delta)
    _emit(args, "standard" if ok else "not standard", {"standard": ok})
    return 0 if ok else 1


def cmd_nbe(args, calc: _Calc) -> int:
    _needs_cbn(args, "nbe")
    from .semantics import INDETERMINATE, normalize_nbe

    nf = normalize_nbe(calc.parse(args.term), calc.delta, args.fuel)
    if nf is INDETERMINATE:
        _emit(args, "indeterminate", {"result": "indeterminate"})
        return 1
    _emit(args, _show(nf), {"result": term_to_json(nf)})
    return 0


def cmd_enc(args, calc: _Calc) -> int:
    _needs_cbn(args, "enc")
    from .hoas import enc

    try:
        e = enc(calc.parse(args.term))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(args, _show(e), term_to_json(e))
    return 0


def cmd_dec(args, calc: _Calc) -> int:
    _needs_cbn(args, "dec")
    from .hoas import dec

    t = dec(calc.parse(args.term))
    if t is None:
        _emit(args, "not an encoding", {"result": None})
        return 1
    _emit(args, _show(t), term_to_json(t))
    return 0


def cmd_adequacy_check(args, calc: _Calc) -> int:
    _needs_cbn(args, "adequacy-check")
    from .hoas import check_adequacy_step

    x = calc.parse(args.term)
    y = calc.step_left(x, calc.delta)
    if y is None:
        _emit(args, "no left step", {"verdict": None})
        return 1
    if args.target is not None and calc.key(calc.parse(args.target)) != calc.key(y):
        raise UsageError("the target is not the left reduct of the term")
    verdict = check_adequacy_step(x, y, calc.delta, args.fuel)
    _emit(args, f"{verdict.value}: {_show(x)} -> {_show(y)}", {"verdict": verdict.value, "to": term_to_json(y)})
    return 0 if verdict.value == "confirmed" else 1


def cmd_suite(args, calc: _Calc) -> int:
    from .suites import SUITES, default_spec, run_suite

    if args.list:
        for name, (_, _, blurb) in SUITES.items():
            print(f"{name:24} {blurb}")
        return 0
    if args.name is None:
        raise UsageError("suite needs a name, 'all', or --list")
    names = list(SUITES) if args.name == "all" else [args.name]
    if any(n not in SUITES for n in names):
        raise UsageError(f"unknown suite {args.name!r}")
    ok, reports = True, []
    for name in names:
        spec: CorpusSpec = default_spec(name)
        changes = {}
        if args.seed is not None:
            changes["seed"] = args.seed
        if args.max_nodes is not None:
            changes["max_nodes"] = args.max_nodes
        if args.delta:
            changes["delta"] = load_delta(args.delta)
        report = run_suite(name, spec.with_(**changes))
        ok &= report.passed
        reports.append(report)
        if not args.json:
            print(report.summary())
            for f in report.failures[:10]:
                print(f"  {f}")
    if args.json:
        print(dumps([r.to_json() for r in reports]))
    return 0 if ok else 1


# -- argument parsing ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--calculus", choices=("cbn", "cbv"), default="cbn")
    shared.add_argument("--delta", metavar="FILE", help="JSON delta table")
    shared.add_argument("--max-steps", type=int, default=100, metavar="N")
    shared.add_argument("--fuel", type=int, default=256, metavar="N")
    shared.add_argument("--seed", type=int, default=None, metavar="N")
    shared.add_argument("--max-nodes", type=int, default=None, metavar="N")
    shared.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="lamkit", description="Lambda-calculus toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help_: str):
        sp = sub.add_parser(name, parents=[shared], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("parse", cmd_parse, "parse and print a term")
    sp.add_argument("term")
    sp.add_argument("--style", choices=("named", "debruijn", "json"), default="named")
    add("reduce", cmd_reduce, "left-reduce a term").add_argument("term")
    add("trace", cmd_trace, "print the left-reduction trace").add_argument("term")
    add("cdev", cmd_cdev, "complete development").add_argument("term")
    sp = add("join", cmd_join, "join two reducts of a term")
    sp.add_argument("term")
    sp.add_argument("left")
    sp.add_argument("right")
    sp = add("standardize", cmd_standardize, "standard sequence between two terms")
    sp.add_argument("term", nargs="?")
    sp.add_argument("target", nargs="?")
    sp.add_argument("--trace-file", metavar="FILE", help="JSON trace to standardize")
    sp = add("check-srs", cmd_check_srs, "is a sequence of terms standard?")
    sp.add_argument("terms", nargs="*")
    sp.add_argument("--file", metavar="FILE", help='JSON {"terms": [...]}')
    sp = add("nbe", cmd_nbe, "normal form by evaluation")
    sp.add_argument("term")
    add("enc", cmd_enc, "encode a term with tag constants").add_argument("term")
    add("dec", cmd_dec, "decode an encoded term").add_argument("term")
    sp = add("adequacy-check", cmd_adequacy_check, "check the encoding against one left step")
    sp.add_argument("term")
    sp.add_argument("target", nargs="?")
    sp = add("suite", cmd_suite, "run a property suite")
    sp.add_argument("name", nargs="?")
    sp.add_argument("--list", action="store_true")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.max_steps < 0 or args.fuel <= 0 or (args.max_nodes is not None and args.max_nodes < 0):
        parser.error("--max-steps and --max-nodes must be natural numbers, --fuel positive")
    try:
        calc = _Calc(args.calculus, None if args.command == "suite" else args.delta)
        return args.fn(args, calc)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except (UsageError, OSError, ValueError) as e:
        # ValueError covers schema errors and ill-formed inputs for the chosen calculus
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
