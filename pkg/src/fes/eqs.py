"""Syntax and evaluation of equation right-hand sides.

Right-hand sides are small expression trees over one lattice: constants,
variables, finite meets/joins, and applications of registered operators.
The tree form is what makes unfolding and syntactic independence decidable;
semantically an equation system is still just a map from valuations to
valuations (``apply_es``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

from .errors import ArityMismatch, SizeGuardExceeded, UnknownOp, UnknownVariable
from .lattice import FiniteLattice

DEFAULT_MAX_VALUATIONS = 10 ** 6


class Expr:
    """Base class for right-hand-side expressions."""

    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    value: object

    def __repr__(self):
        return f"Const({self.value!r})"


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def __repr__(self):
        return f"Var({self.name})"


@dataclass(frozen=True)
class Meet(Expr):
    args: tuple

    def __init__(self, args):
        object.__setattr__(self, "args", tuple(args))


@dataclass(frozen=True)
class Join(Expr):
    args: tuple

    def __init__(self, args):
        object.__setattr__(self, "args", tuple(args))


@dataclass(frozen=True)
class Apply(Expr):
    op: str
    args: tuple

    def __init__(self, op, args):
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "args", tuple(args))


@dataclass(frozen=True)
class RegisteredOp:
    """An operator usable in ``Apply``: a total table plus a monotonicity flag.

    The flag is a certificate, not an observation: claiming ``monotone=True``
    for a table that is not monotone (in the pointwise product order) is
    rejected at construction.  A monotone table may still be registered with
    ``monotone=False``; it merely loses the structural certificate.
    """

    name: str
    arity: int
    table: Mapping  # tuple of elements -> element
    monotone: bool
    lattice: FiniteLattice

    def __post_init__(self):
        for key in itertools.product(self.lattice.elements, repeat=self.arity):
            if key not in self.table:
                raise ValueError(f"op {self.name}: table not total, missing {key!r}")
        if self.monotone and not self._table_monotone():
            raise ValueError(f"op {self.name}: declared monotone but table is not")

    def _table_monotone(self):
        lat = self.lattice
        for k1 in self.table:
            for k2 in self.table:
                if all(lat.leq(a, b) for a, b in zip(k1, k2)):
                    if not lat.leq(self.table[k1], self.table[k2]):
                        return False
        return True


def bool_negation(lat: FiniteLattice) -> RegisteredOp:
    """The built-in non-monotone `!` over the two-point lattice."""
    table = {(False,): True, (True,): False}
    return RegisteredOp("not", 1, table, monotone=False, lattice=lat)


@dataclass
class EquationSystem:
    """A finite lattice, an ordered variable set, and one rhs per variable."""

    lattice: FiniteLattice
    vars: tuple
    rhs: dict  # var name -> Expr
    ops: dict = field(default_factory=dict)  # op name -> RegisteredOp

    def __post_init__(self):
        self.vars = tuple(self.vars)
        for x in self.vars:
            if x not in self.rhs:
                raise UnknownVariable(f"no equation for {x}")
        for x, e in self.rhs.items():
            if x not in self.vars:
                raise UnknownVariable(f"equation for undeclared variable {x}")
            for y in free_vars(e):
                if y not in self.vars:
                    raise UnknownVariable(f"rhs of {x} mentions undeclared {y}")

    def with_rhs(self, x, e: Expr) -> "EquationSystem":
        """Copy of this system with the equation for x replaced."""
        if x not in self.rhs:
            raise UnknownVariable(x)
        new = dict(self.rhs)
        new[x] = e
        return EquationSystem(self.lattice, self.vars, new, self.ops)


def free_vars(e: Expr) -> frozenset:
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, Const):
        return frozenset()
    return frozenset().union(*(free_vars(a) for a in e.args)) if e.args else frozenset()


def subst(e: Expr, y: str, d: Expr) -> Expr:
    """Replace every occurrence of variable y in e by d."""
    if isinstance(e, Var):
        return d if e.name == y else e
    if isinstance(e, Const):
        return e
    args = tuple(subst(a, y, d) for a in e.args)
    if isinstance(e, Meet):
        return Meet(args)
    if isinstance(e, Join):
        return Join(args)
    return Apply(e.op, args)


def eval_expr(es: EquationSystem, e: Expr, v: Mapping):
    lat = es.lattice
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return v[e.name]
    if isinstance(e, Meet):
        return lat.glb(eval_expr(es, a, v) for a in e.args)
    if isinstance(e, Join):
        return lat.lub(eval_expr(es, a, v) for a in e.args)
    if isinstance(e, Apply):
        op = es.ops.get(e.op)
        if op is None:
            raise UnknownOp(e.op)
        if len(e.args) != op.arity:
            raise ArityMismatch(f"{e.op} expects {op.arity} args, got {len(e.args)}")
        return op.table[tuple(eval_expr(es, a, v) for a in e.args)]
    raise TypeError(f"not an expression: {e!r}")


def apply_es(es: EquationSystem, v: Mapping) -> dict:
    """The system as a function on valuations: evaluate every rhs at once."""
    return {x: eval_expr(es, es.rhs[x], v) for x in es.vars}


def is_monotone_es(es: EquationSystem,
                   max_valuations: int = DEFAULT_MAX_VALUATIONS) -> tuple[bool, tuple | None]:
    """Monotonicity of the system, with a witness valuation pair on failure.

    Systems built from constants, variables, meets, joins and
    monotone-flagged operators are certified structurally.  Anything else is
    checked by enumerating all comparable valuation pairs, which is guarded
    by ``max_valuations``.
    """
    if all(_structurally_monotone(es, es.rhs[x]) for x in es.vars):
        return True, None
    lat = es.lattice
    n = len(es.vars)
    if len(lat.elements) ** n > max_valuations:
        raise SizeGuardExceeded(
            f"{len(lat.elements)}^{n} valuations exceed the bound {max_valuations}")
    # the extreme pair is the cheapest and most likely violation, try it first
    vbot = {x: lat.bottom for x in es.vars}
    vtop = {x: lat.top for x in es.vars}
    wbot = apply_es(es, vbot)
    wtop = apply_es(es, vtop)
    if not all(lat.leq(wbot[x], wtop[x]) for x in es.vars):
        return False, (vbot, vtop)
    pairs = sorted(lat.leq_pairs(), key=lambda p: (lat.index[p[0]], lat.index[p[1]]))
    for combo in itertools.product(pairs, repeat=n):
        v1 = {x: p[0] for x, p in zip(es.vars, combo)}
        v2 = {x: p[1] for x, p in zip(es.vars, combo)}
        w1 = apply_es(es, v1)
        w2 = apply_es(es, v2)
        if not all(lat.leq(w1[x], w2[x]) for x in es.vars):
            return False, (v1, v2)
    return True, None


def _structurally_monotone(es, e) -> bool:
    if isinstance(e, (Const, Var)):
        return True
    if isinstance(e, (Meet, Join)):
        return all(_structurally_monotone(es, a) for a in e.args)
    if isinstance(e, Apply):
        op = es.ops.get(e.op)
        if op is None:
            raise UnknownOp(e.op)
        return op.monotone and all(_structurally_monotone(es, a) for a in e.args)
    return False


def simplify(es: EquationSystem, e: Expr) -> Expr:
    """Semantics-preserving cleanup of an expression.

    Flattens nested meets/joins, folds constants, drops neutral elements,
    short-circuits on absorbing elements, removes duplicates and applies
    absorption (a & (a | b) = a and dually).  Valid in every lattice; no
    Boolean-specific laws are used.
    """
    lat = es.lattice
    if isinstance(e, (Const, Var)):
        return e
    if isinstance(e, Apply):
        args = tuple(simplify(es, a) for a in e.args)
        if all(isinstance(a, Const) for a in args):
            op = es.ops.get(e.op)
            if op is None:
                raise UnknownOp(e.op)
            if len(args) != op.arity:
                raise ArityMismatch(e.op)
            return Const(op.table[tuple(a.value for a in args)])
        return Apply(e.op, args)

    is_meet = isinstance(e, Meet)
    neutral = lat.top if is_meet else lat.bottom
    absorbing = lat.bottom if is_meet else lat.top
    fold = lat.meet if is_meet else lat.join
    dual_cls = Join if is_meet else Meet

    flat = []
    const = neutral
    for a in e.args:
        a = simplify(es, a)
        if isinstance(a, type(e)):
            inner = a.args
        else:
            inner = (a,)
        for b in inner:
            if isinstance(b, Const):
                const = fold(const, b.value)
            elif b not in flat:
                flat.append(b)
    if const == absorbing:
        return Const(absorbing)
    # absorption: inside a meet, a | ... is redundant if some other
    # argument already occurs among its disjuncts (and dually)
    kept = [a for a in flat
            if not (isinstance(a, dual_cls)
                    and any(b in a.args for b in flat if b != a))]
    if const != neutral:
        kept.append(Const(const))
    if not kept:
        return Const(neutral)
    if len(kept) == 1:
        return kept[0]
    return Meet(kept) if is_meet else Join(kept)
