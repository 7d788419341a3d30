"""Command-line surface: solve, transform, graph, check, oracle.

Results go to standard output, diagnostics to standard error.  Exit codes:
0 success, 1 a precondition or verification failure, 2 a usage or parse
error.  Output is deterministic: identical inputs and flags produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import sys
import warnings

from .checker import ALL_PROPERTIES, GenConfig, run_suite
from .depgraph import SEMANTIC, SYNTACTIC, build_graph, to_dot
from .errors import FesError, ParseError, PreconditionFailed
from .gauss import gauss_solve, scc_solve
from .parser import parse_document, print_fes, print_valuation
from .semantics import sem
from .specs import MU, NU, Fes
from .transforms import (
    apply_migrate,
    apply_partial,
    apply_sign_flip,
    apply_split,
    apply_swap,
    apply_unfold,
    reduce_alternations,
)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _spec_override(text: str, f: Fes) -> Fes:
    entries = []
    for part in text.split(","):
        part = part.strip()
        if part.startswith("mu"):
            sign = MU
        elif part.startswith("nu"):
            sign = NU
        else:
            raise ParseError(f"spec entry {part!r} must start with mu or nu")
        name = part[2:].strip()
        if not name:
            raise ParseError(f"spec entry {part!r} names no variable")
        entries.append((sign, name))
    return Fes(f.es, tuple(entries))


def _load(args):
    doc = parse_document(_read(args.file))
    f = doc.fes
    if getattr(args, "spec", None):
        f = _spec_override(args.spec, f)
    v = {x: f.es.lattice.bottom for x in f.es.vars}
    v.update(doc.params)
    return doc, f, v


def _printable(f: Fes, v) -> str:
    """Document form of f, demoting unused non-identity equations to params."""
    from .eqs import Var
    from .specs import dom

    es = f.es
    d = dom(f.spec)
    for x in es.vars:
        if x not in d and es.rhs[x] != Var(x):
            es = es.with_rhs(x, Var(x))
    params = {x: v[x] for x in es.vars if x not in d}
    return print_fes(Fes(es, f.spec), params)


def _cmd_solve(args) -> int:
    doc, f, v = _load(args)
    method = "sem" if args.oracle else args.method
    if method == "sem":
        w = sem(f, v)
    elif method == "gauss":
        w = gauss_solve(f).valuation
    elif method == "scc":
        w = scc_solve(f, v, args.graph_mode)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(method)
    sys.stdout.write(print_valuation(f, w))
    return 0


def _cmd_transform(args) -> int:
    doc, f, v = _load(args)
    mode = args.graph_mode
    op = args.op
    if op == "unfold":
        _need(args, "x", "y")
        rep = apply_unfold(f, args.x, args.y, mode, force=args.force)
    elif op == "partial":
        _need(args, "x")
        rep = apply_partial(f, args.x, v)
    elif op == "swap":
        _need(args, "at")
        rep = apply_swap(f, args.at, mode, allow_ineq=args.allow_ineq,
                         force=args.force)
    elif op == "migrate":
        if args.range is None:
            raise ParseError("--range A:B:C is required for migrate")
        try:
            a, b, c = (int(p) for p in args.range.split(":"))
        except ValueError:
            raise ParseError(f"--range {args.range!r} is not of the form A:B:C")
        rep = apply_migrate(f, (a, b), (b, c), mode, force=args.force)
    elif op == "signflip":
        _need(args, "at")
        rep = apply_sign_flip(f, args.at, mode)
    elif op == "split":
        _need(args, "x")
        rep = apply_split(f, args.x, mode, dependent_first=args.dependent_first)
    elif op == "reduce-alt":
        rep = reduce_alternations(f, mode)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(op)
    just = rep.justification
    if isinstance(just, (list, tuple)):
        just = ",".join(just) if just else "NONE"
    sys.stdout.write(f"justification: {just}\nrelation: {rep.relation}\n")
    for step in rep.steps:
        sys.stderr.write(f"step: {step}\n")
    sys.stdout.write(_printable(rep.result, v))
    return 0


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise ParseError(f"--{n} is required for --op {args.op}")


def _cmd_graph(args) -> int:
    doc, f, v = _load(args)
    sys.stdout.write(to_dot(build_graph(f, args.graph_mode)))
    return 0


def _cmd_check(args) -> int:
    props = ALL_PROPERTIES if args.props == "all" else tuple(
        p.strip() for p in args.props.split(",") if p.strip())
    cfg = GenConfig(seed=args.seed, cases=args.cases, max_vars=args.max_vars,
                    lattice_families=args.lattices, graph_mode=args.graph_mode)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        results = run_suite(cfg, props)
    for w in caught:
        sys.stderr.write(f"warning: {w.message}\n")
    failures = 0
    for r in results:
        if r.counterexample is None:
            note = " (starved)" if r.starved else ""
            sys.stdout.write(f"{r.property}: ok, {r.cases} cases{note}\n")
            continue
        failures += 1
        cex = r.counterexample
        sys.stdout.write(f"{r.property}: FAIL after {r.cases} cases\n")
        sys.stdout.write(f"  {cex.details}\n")
        if cex.fes is not None:
            try:
                doc = _printable(cex.fes, cex.valuation or {})
            except (ValueError, KeyError):
                doc = f"  (no document form: {cex.fes.spec!r})\n"
            for line in doc.splitlines():
                sys.stdout.write(f"  {line}\n")
        if cex.valuation is not None and cex.fes is not None:
            for line in print_valuation(cex.fes, cex.valuation).splitlines():
                sys.stdout.write(f"  input {line}\n")
    return 1 if failures else 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fes",
        description="Fixpoint equation systems over finite lattices.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, with_spec=True):
        p.add_argument("file", help="input document, or - for stdin")
        if with_spec:
            p.add_argument("--spec", help='override specification, e.g. "muX,nuY"')
        p.add_argument("--graph-mode", choices=[SYNTACTIC, SEMANTIC],
                       default=SYNTACTIC)

    p = sub.add_parser("solve", help="solve a system")
    p.add_argument("--method", choices=["sem", "gauss", "scc"], default="sem")
    common(p)
    p.set_defaults(fn=_cmd_solve, oracle=False)

    p = sub.add_parser("oracle", help="solve with the reference semantics")
    common(p)
    p.set_defaults(fn=_cmd_solve, oracle=True, method="sem")

    p = sub.add_parser("transform", help="apply a solution-preserving rewrite")
    p.add_argument("--op", required=True,
                   choices=["unfold", "partial", "swap", "migrate",
                            "signflip", "split", "reduce-alt"])
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--at", type=int)
    p.add_argument("--range", help="block boundaries A:B:C for migrate")
    p.add_argument("--force", action="store_true")
    p.add_argument("--allow-ineq", action="store_true")
    p.add_argument("--dependent-first", action="store_true")
    common(p)
    p.set_defaults(fn=_cmd_transform)

    p = sub.add_parser("graph", help="print the dependency graph as DOT")
    common(p)
    p.set_defaults(fn=_cmd_graph)

    p = sub.add_parser("check", help="run the randomized property suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--max-vars", type=int, default=5)
    p.add_argument("--props", default="all")
    p.add_argument("--lattices", default="bool,chain3,diamond,powerset2")
    p.add_argument("--graph-mode", choices=[SYNTACTIC, SEMANTIC],
                   default=SYNTACTIC)
    p.set_defaults(fn=_cmd_check)
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    try:
        return args.fn(args)
    except ParseError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except PreconditionFailed as e:
        sys.stderr.write(f"error: {e}\n")
        if e.witness is not None:
            if isinstance(e.witness, (list, tuple)):
                sys.stderr.write(
                    "witness path: " + " -> ".join(str(w) for w in e.witness) + "\n")
            else:
                sys.stderr.write(f"witness: {e.witness!r}\n")
        return 1
    except (FesError, ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    except OSError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


def entry():  # console-script hook
    sys.exit(main())


if __name__ == "__main__":
    entry()
