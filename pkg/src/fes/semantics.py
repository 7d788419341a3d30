"""The recursive FES semantics — the single source of truth for solutions.

``sem`` resolves the specification right to left: the head variable's inner
fixpoint function is tabulated by one recursive solve per lattice element
and its extremal fixpoint substituted into the valuation.  The cost guard is
counted in right-hand-side evaluations so runs are deterministic; override
the default with the FES_MAX_EVALS environment variable.
"""

from __future__ import annotations

import itertools
import os

from . import _kernel
from ._encode import decode_valuation, encode, encode_valuation
from .eqs import Const, apply_es, eval_expr, is_monotone_es
from .errors import MonotonicityRequired
from .specs import Fes, Spec, dom

DEFAULT_MAX_EVALS = 10 ** 7


def _max_evals(explicit=None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get("FES_MAX_EVALS")
    return int(env) if env else DEFAULT_MAX_EVALS


def sem(f: Fes, v, max_evals=None) -> dict:
    """Solution of the Fes from valuation v, as a full valuation."""
    enc = encode(f)
    eta, _ = _kernel.solve_fes(enc, encode_valuation(f, v), _max_evals(max_evals))
    return decode_valuation(f, eta)


def sem_spec(es, spec: Spec, v, max_evals=None) -> dict:
    """sem for an ad-hoc specification over the same equations."""
    return sem(Fes(es, spec), v, max_evals=max_evals)


def bottom_valuation(es) -> dict:
    return {x: es.lattice.bottom for x in es.vars}


def all_valuations(es):
    """Every valuation of the system, in deterministic order."""
    for combo in itertools.product(es.lattice.elements, repeat=len(es.vars)):
        yield dict(zip(es.vars, combo))


def random_valuation(es, rng) -> dict:
    return {x: rng.choice(es.lattice.elements) for x in es.vars}


def valuation_leq(es, v1, v2) -> bool:
    return all(es.lattice.leq(v1[x], v2[x]) for x in es.vars)


def check_solution(f: Fes, v) -> bool:
    """Does the computed solution satisfy every equation in the spec's domain?"""
    ok, witness = is_monotone_es(f.es)
    if not ok:
        raise MonotonicityRequired(f"system is not monotone, witness {witness}")
    w = sem(f, v)
    return all(eval_expr(f.es, f.es.rhs[x], w) == w[x] for x in dom(f.spec))


def check_sanity(f: Fes, samples) -> list[str]:
    """Spot-check the three basic sanity properties on sample valuations.

    For each sample valuation: (1) variables outside the spec keep their
    input value; (2) changing an equation outside the spec's domain does not
    change the solution; (3) changing the input on spec variables does not
    change the solution.
    """
    out = []
    es = f.es
    d = dom(f.spec)
    outside = [x for x in es.vars if x not in d]
    for v in samples:
        w = sem(f, v)
        for x in outside:
            if w[x] != v[x]:
                out.append(f"sanity 1 violated at {x}: {v[x]!r} became {w[x]!r}")
        if outside:
            x = outside[0]
            es2 = es.with_rhs(x, Const(es.lattice.top))
            w2 = sem(Fes(es2, f.spec), v)
            if w2 != w:
                out.append(f"sanity 2 violated: rewriting rhs of {x} changed the solution")
        for x in d:
            for p in es.lattice.elements:
                if p == v[x]:
                    continue
                v2 = dict(v)
                v2[x] = p
                if sem(f, v2) != w:
                    out.append(
                        f"sanity 3 violated: input change on {x} altered the solution")
                break
    return out


def es_as_fn(es):
    """The system as a plain function on valuations (for oracle-style tests)."""
    return lambda v: apply_es(es, v)
