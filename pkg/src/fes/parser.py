"""Text format for equation systems.

A document is a lattice declaration, optional operator and parameter
declarations, and a list of signed equations whose order doubles as the
specification:

    lattice bool
    op not(1) { false -> true; true -> false; }
    param P = false;
    mu X = Y & !Z;
    nu Y = X | op(not, Z);

Grammar notes: `&` is meet, `|` is join, `!` is Boolean negation (sugar for
the registered op `not`), `top`/`bot` are the extremes, `@name` a literal
element of a `finite` lattice, `{a,b}` a powerset element, integers chain
elements.  Precedence: `!` binds tighter than `&`, which binds tighter than
`|`.  `#` starts a line comment.  Parameters are free variables: they carry
an input value and their equation is the identity, so they never change.

``parse`` and ``print_fes`` are inverse up to whitespace on documents in
canonical form.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .eqs import Apply, Const, EquationSystem, Expr, Join, Meet, RegisteredOp, Var, bool_negation
from .errors import ParseError
from .lattice import FiniteLattice, covers, verify_lattice
from .specs import MU, NU, Fes, Sign, dom, spec

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<arrow>->)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[{}(),;=<&|!@])
""", re.VERBOSE)

_KEYWORDS = {
    "lattice", "bool", "chain", "powerset", "finite", "elements", "order",
    "param", "op", "monotone", "mu", "nu", "true", "false", "top", "bot",
}


@dataclass
class _Tok:
    kind: str  # 'int' | 'ident' | 'sym' | 'arrow' | 'eof'
    text: str
    line: int
    col: int


def _tokenize(text):
    toks = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line=line, column=col)
        kind = m.lastgroup
        val = m.group()
        if kind == "nl":
            line += 1
            col = 1
        elif kind in ("ws", "comment"):
            col += len(val)
        else:
            toks.append(_Tok(kind, val, line, col))
            col += len(val)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, line=tok.line, column=tok.col)

    def expect(self, text):
        t = self.next()
        if t.text != text:
            self.fail(f"expected {text!r}, found {t.text!r}", t)
        return t

    def accept(self, text) -> bool:
        if self.peek().text == text:
            self.i += 1
            return True
        return False

    def ident(self) -> str:
        t = self.next()
        if t.kind != "ident" or t.text in _KEYWORDS:
            self.fail(f"expected an identifier, found {t.text!r}", t)
        return t.text

    def raw_ident(self) -> str:
        # element names may shadow keywords (e.g. 'top' in a finite lattice)
        t = self.next()
        if t.kind != "ident":
            self.fail(f"expected a name, found {t.text!r}", t)
        return t.text

    def integer(self) -> int:
        t = self.next()
        if t.kind != "int":
            self.fail(f"expected an integer, found {t.text!r}", t)
        return int(t.text)

    # -- lattice declaration ----------------------------------------------

    def lattice_decl(self) -> FiniteLattice:
        self.expect("lattice")
        t = self.next()
        if t.text == "bool":
            return FiniteLattice.booleans()
        if t.text == "chain":
            return FiniteLattice.chain(self.integer())
        if t.text == "powerset":
            return FiniteLattice.powerset(self.integer())
        if t.text == "finite":
            return self.finite_decl()
        self.fail(f"unknown lattice family {t.text!r}", t)

    def finite_decl(self) -> FiniteLattice:
        self.expect("{")
        self.expect("elements")
        els = []
        while self.peek().kind == "ident":
            els.append(self.raw_ident())
        self.expect(";")
        gen = []
        while self.accept("order"):
            a = self.raw_ident()
            self.expect("<")
            b = self.raw_ident()
            self.expect(";")
            gen.append((a, b))
        self.expect("}")
        for a, b in gen:
            if a not in els or b not in els:
                self.fail(f"order mentions undeclared element in {a} < {b}")
        # reflexive-transitive closure of the declared generators
        leq = {(e, e) for e in els}
        leq |= set(gen)
        changed = True
        while changed:
            changed = False
            for (a, b), (c, d) in itertools.product(list(leq), list(leq)):
                if b == c and (a, d) not in leq:
                    leq.add((a, d))
                    changed = True
        lat = FiniteLattice(els, leq, name="finite")
        problems = verify_lattice(lat)
        if problems:
            self.fail(f"declared order is not a complete lattice: {problems[0]}")
        return lat

    # -- values -------------------------------------------------------------

    def value(self, lat: FiniteLattice):
        t = self.next()
        if t.text == "true" or t.text == "false":
            v = t.text == "true"
        elif t.text == "top":
            return lat.top
        elif t.text == "bot":
            return lat.bottom
        elif t.kind == "int":
            v = int(t.text)
        elif t.text == "{":
            names = []
            if not self.accept("}"):
                names.append(self.ident())
                while self.accept(","):
                    names.append(self.ident())
                self.expect("}")
            v = frozenset(names)
        elif t.text == "@":
            v = self.raw_ident()
        elif t.kind == "ident" and t.text not in _KEYWORDS:
            v = t.text
        else:
            self.fail(f"expected a lattice element, found {t.text!r}", t)
        if v not in lat.index:
            self.fail(f"{v!r} is not an element of lattice {lat.name!r}", t)
        return v

    # -- expressions --------------------------------------------------------

    def expr(self, lat) -> Expr:
        args = [self.meet_level(lat)]
        while self.accept("|"):
            args.append(self.meet_level(lat))
        return args[0] if len(args) == 1 else Join(args)

    def meet_level(self, lat) -> Expr:
        args = [self.unary(lat)]
        while self.accept("&"):
            args.append(self.unary(lat))
        return args[0] if len(args) == 1 else Meet(args)

    def unary(self, lat) -> Expr:
        if self.accept("!"):
            return Apply("not", (self.unary(lat),))
        return self.atom(lat)

    def atom(self, lat) -> Expr:
        t = self.peek()
        if self.accept("("):
            e = self.expr(lat)
            self.expect(")")
            return e
        if t.text == "op":
            self.next()
            self.expect("(")
            name = self.ident()
            args = []
            while self.accept(","):
                args.append(self.expr(lat))
            self.expect(")")
            return Apply(name, args)
        if t.text in ("true", "false", "top", "bot") or t.kind == "int" \
                or t.text in ("{", "@"):
            return Const(self.value(lat))
        if t.kind == "ident" and t.text not in _KEYWORDS:
            return Var(self.next().text)
        self.fail(f"expected an expression, found {t.text!r}", t)

    # -- declarations ---------------------------------------------------------

    def op_decl(self, lat) -> RegisteredOp:
        self.expect("op")
        name = self.ident()
        self.expect("(")
        arity = self.integer()
        self.expect(")")
        monotone = self.accept("monotone")
        self.expect("{")
        table = {}
        while not self.accept("}"):
            key = [self.value(lat)]
            while self.accept(","):
                key.append(self.value(lat))
            t = self.next()
            if t.kind != "arrow":
                self.fail(f"expected '->', found {t.text!r}", t)
            result = self.value(lat)
            self.expect(";")
            if len(key) != arity:
                self.fail(f"op {name}: row has {len(key)} arguments, arity is {arity}")
            table[tuple(key)] = result
        try:
            return RegisteredOp(name, arity, table, monotone, lat)
        except ValueError as exc:
            self.fail(str(exc))


@dataclass
class Document:
    fes: Fes
    params: dict = field(default_factory=dict)  # free variable -> input value


def parse_document(text: str) -> Document:
    p = _Parser(text)
    lat = p.lattice_decl()
    ops = {}
    params = {}
    entries = []
    rhs = {}
    order = []
    while p.peek().kind != "eof":
        t = p.peek()
        if t.text == "op":
            o = p.op_decl(lat)
            if o.name in ops:
                p.fail(f"op {o.name} declared twice", t)
            ops[o.name] = o
        elif t.text == "param":
            p.next()
            x = p.ident()
            p.expect("=")
            v = p.value(lat)
            p.expect(";")
            if x in rhs:
                p.fail(f"{x} defined twice", t)
            params[x] = v
            rhs[x] = Var(x)
            order.append(x)
        elif t.text in ("mu", "nu"):
            p.next()
            sign = MU if t.text == "mu" else NU
            x = p.ident()
            p.expect("=")
            e = p.expr(lat)
            p.expect(";")
            if x in rhs:
                p.fail(f"{x} defined twice", t)
            rhs[x] = e
            order.append(x)
            entries.append((sign, x))
        else:
            p.fail(f"expected 'op', 'param', 'mu' or 'nu', found {t.text!r}", t)
    if "not" not in ops and set(lat.elements) == {False, True}:
        ops["not"] = bool_negation(lat)
    referenced = set()
    for e in rhs.values():
        referenced |= _free(e)
    for x in sorted(referenced - set(order)):
        p.fail(f"undefined variable {x}")
    es = EquationSystem(lat, tuple(order), rhs, ops)
    return Document(Fes(es, spec(*entries)), params)


def _free(e):
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Const):
        return set()
    return set().union(*(_free(a) for a in e.args)) if e.args else set()


def parse(text: str) -> Fes:
    return parse_document(text).fes


# -- printing ----------------------------------------------------------------


def format_value(lat: FiniteLattice, v) -> str:
    if set(lat.elements) == {False, True}:
        return "true" if v else "false"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, frozenset):
        return "{" + ",".join(sorted(v)) + "}"
    return f"@{v}"


def _format_lattice(lat: FiniteLattice) -> str:
    if lat == FiniteLattice.booleans():
        return "lattice bool"
    n = len(lat.elements)
    if lat == FiniteLattice.chain(n):
        return f"lattice chain {n}"
    if all(isinstance(e, frozenset) for e in lat.elements):
        base = frozenset().union(*lat.elements) if n > 1 else frozenset()
        k = len(base)
        if lat == FiniteLattice.powerset(k):
            return f"lattice powerset {k}"
    parts = [f"lattice finite {{ elements {' '.join(str(e) for e in lat.elements)};"]
    for e in lat.elements:
        for c in covers(lat, e):
            parts.append(f"order {c} < {e};")
    parts.append("}")
    return " ".join(parts)


_LVL_JOIN, _LVL_MEET, _LVL_UNARY = 0, 1, 2


def format_expr(lat, e: Expr, level: int = _LVL_JOIN) -> str:
    if isinstance(e, Const):
        return format_value(lat, e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Apply):
        if e.op == "not" and len(e.args) == 1:
            return "!" + format_expr(lat, e.args[0], _LVL_UNARY)
        inner = ", ".join(format_expr(lat, a, _LVL_JOIN) for a in e.args)
        return f"op({e.op}{', ' if inner else ''}{inner})"
    if isinstance(e, (Meet, Join)):
        if not e.args:
            return "top" if isinstance(e, Meet) else "bot"
        if len(e.args) == 1:
            return format_expr(lat, e.args[0], level)
        mine = _LVL_MEET if isinstance(e, Meet) else _LVL_JOIN
        sepa = " & " if isinstance(e, Meet) else " | "
        body = sepa.join(format_expr(lat, a, mine + 1) for a in e.args)
        return f"({body})" if mine < level else body
    raise TypeError(f"not an expression: {e!r}")


def print_fes(f: Fes, params: dict | None = None) -> str:
    """Canonical document form of a Fes.

    Variables outside the spec must be identity equations (parameters);
    their printed input value comes from ``params`` (default: bottom).
    Specs that bind a variable twice have no document form.
    """
    es = f.es
    lat = es.lattice
    names = [x for _, x in f.spec]
    if len(set(names)) != len(names):
        raise ValueError("specs with duplicate variables cannot be printed")
    sign_of = dict((x, s) for s, x in f.spec)
    lines = [_format_lattice(lat)]
    is_bool = set(lat.elements) == {False, True}
    for name in sorted(es.ops):
        o = es.ops[name]
        if is_bool and name == "not" and o.table == {(False,): True, (True,): False}:
            continue  # implied by the '!' sugar
        rows = sorted(o.table, key=lambda k: tuple(lat.index[v] for v in k))
        body = " ".join(
            f"{', '.join(format_value(lat, v) for v in k)} -> {format_value(lat, o.table[k])};"
            for k in rows)
        mono = " monotone" if o.monotone else ""
        lines.append(f"op {name}({o.arity}){mono} {{ {body} }}")
    params = params or {}
    for x in es.vars:
        if x in sign_of:
            continue
        if es.rhs[x] != Var(x):
            raise ValueError(
                f"{x} is outside the spec but not an identity equation; "
                "the document format has no way to express it")
        lines.append(f"param {x} = {format_value(lat, params.get(x, lat.bottom))};")
    for s, x in f.spec:
        kw = "mu" if s == MU else "nu"
        lines.append(f"{kw} {x} = {format_expr(lat, es.rhs[x])};")
    return "\n".join(lines) + "\n"


def print_valuation(f: Fes, v: dict) -> str:
    """One `name = value` line per spec variable, in spec order."""
    lat = f.es.lattice
    seen = []
    for _, x in f.spec:
        if x not in seen:
            seen.append(x)
    return "\n".join(f"{x} = {format_value(lat, v[x])}" for x in seen) + ("\n" if seen else "")
