"""Gauss elimination for Boolean equation systems, plus SCC-based solving.

Over the two-point lattice a fixpoint equation can be resolved locally:
the least fixpoint of f is f(bottom) and the greatest is f(top).  Combining
local resolution with backward substitution and a forward evaluation pass
solves any closed negation-free Boolean system without iterating.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .depgraph import SYNTACTIC, build_graph, sccs
from .eqs import Const, eval_expr, free_vars, is_monotone_es, simplify, subst
from .errors import (
    MonotonicityRequired,
    NotBooleanLattice,
    OpenSystem,
    PreconditionFailed,
)
from .lattice import FiniteLattice
from .semantics import sem
from .specs import MU, Fes, dom, dom_ordered


@dataclass
class BesSolution:
    valuation: dict
    steps: list = field(default_factory=list)  # (rule id, variables involved)


def _require_boolean(lat: FiniteLattice):
    if set(lat.elements) != {False, True}:
        raise NotBooleanLattice(f"lattice {lat.name!r} is not the two-point Boolean lattice")


def local_solve(es, sign, x, e):
    """Eliminate x from its own right-hand side.

    mu plugs in bottom, nu plugs in top; only sound over the Boolean
    lattice, where the fixpoint chain stabilizes after one step.
    """
    _require_boolean(es.lattice)
    fill = Const(es.lattice.bottom if sign == MU else es.lattice.top)
    return simplify(es, subst(e, x, fill))


def gauss_solve(f: Fes) -> BesSolution:
    """Solve a closed, duplicate-free, monotone Boolean system exactly.

    Backward phase: walk the spec right to left, locally resolving each
    equation and substituting it into all earlier ones.  After that the
    first equation is variable-free, so a left-to-right forward pass
    evaluates every variable to a constant.
    """
    es = f.es
    _require_boolean(es.lattice)
    s = tuple(f.spec)
    names = [x for _, x in s]
    if len(set(names)) != len(names):
        raise PreconditionFailed(condition="spec binds a variable twice",
                                 witness=[x for x in names if names.count(x) > 1][0])
    if dom(s) != set(es.vars):
        raise OpenSystem(f"unsolved parameters: {sorted(set(es.vars) - dom(s))}")
    ok, witness = is_monotone_es(es)
    if not ok:
        raise MonotonicityRequired(f"system is not monotone, witness {witness}")

    rhs = {x: es.rhs[x] for x in es.vars}
    steps = []
    # backward: after handling position i, equation i mentions only
    # variables bound at positions < i
    for i in range(len(s) - 1, -1, -1):
        sign, x = s[i]
        rhs[x] = local_solve(es, sign, x, rhs[x])
        steps.append(("LOCAL", (x,)))
        for j in range(i):
            _, y = s[j]
            if x in free_vars(rhs[y]):
                rhs[y] = simplify(es, subst(rhs[y], x, rhs[x]))
                steps.append(("UNFOLD_THM", (y, x)))
    # forward: each equation now only needs the values already computed
    val = {}
    for _, x in s:
        val[x] = eval_expr(es, rhs[x], val)
        steps.append(("PARTIAL", (x,)))
    return BesSolution(val, steps)


def scc_solve(f: Fes, v=None, mode: str = SYNTACTIC) -> dict:
    """Solve component-wise: terminal dependency components first.

    Splitting off a terminal component keeps the rest independent of it, so
    the sub-solutions can be threaded through one valuation.  Equals the
    reference semantics on monotone systems.
    """
    es = f.es
    ok, witness = is_monotone_es(es)
    if not ok:
        raise MonotonicityRequired(f"system is not monotone, witness {witness}")
    if v is None:
        v = {x: es.lattice.bottom for x in es.vars}
    eta = dict(v)
    g = build_graph(f, mode)
    for comp in sccs(g):
        sub = tuple(e for e in f.spec if e[1] in comp)
        eta = sem(Fes(es, sub), eta)
    return eta
