import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fes.eqs import (
    Apply,
    Const,
    EquationSystem,
    Join,
    Meet,
    RegisteredOp,
    Var,
    apply_es,
    bool_negation,
    eval_expr,
    free_vars,
    is_monotone_es,
    simplify,
    subst,
)
from fes.lattice import FiniteLattice

from conftest import load

BOOL = FiniteLattice.booleans()


def _bes(rhs):
    return EquationSystem(BOOL, tuple(rhs), rhs, {"not": bool_negation(BOOL)})


def test_eval_basics(negated):
    es = negated.es
    v = {"X": False, "Y": False, "Z": False}
    assert eval_expr(es, Var("X"), {"X": True, "Y": False, "Z": False}) is True
    assert eval_expr(es, es.rhs["X"], v) is False          # Y & Z at bottom
    assert eval_expr(es, es.rhs["Z"], v) is True           # !X at X=bottom


def test_apply_es_extremes(negated):
    es = negated.es
    lo = apply_es(es, {"X": False, "Y": False, "Z": False})
    hi = apply_es(es, {"X": True, "Y": True, "Z": True})
    assert (lo["X"], lo["Y"], lo["Z"]) == (False, False, True)
    assert (hi["X"], hi["Y"], hi["Z"]) == (True, True, False)


def test_apply_es_constants():
    es = _bes({"X": Const(True), "Y": Const(False)})
    for vx in (False, True):
        out = apply_es(es, {"X": vx, "Y": vx})
        assert out == {"X": True, "Y": False}


def test_is_monotone_es_witness(negated):
    ok, witness = is_monotone_es(negated.es)
    assert not ok
    v1, v2 = witness
    assert v1 == {"X": False, "Y": False, "Z": False}
    assert v2 == {"X": True, "Y": True, "Z": True}
    lo, hi = apply_es(negated.es, v1), apply_es(negated.es, v2)
    assert (lo["X"], lo["Y"], lo["Z"]) == (False, False, True)
    assert (hi["X"], hi["Y"], hi["Z"]) == (True, True, False)


def test_negation_free_is_certified_monotone(backsub):
    assert is_monotone_es(backsub.es) == (True, None)


def test_structural_certificate_matches_enumeration():
    # meet/join systems over the diamond: certificate implies the full check
    rng = random.Random(5)
    lat = FiniteLattice.diamond()
    for _ in range(30):
        names = ("A", "B")
        rhs = {}
        for x in names:
            args = [Var(rng.choice(names)), Const(rng.choice(lat.elements))]
            rhs[x] = Meet(args) if rng.random() < 0.5 else Join(args)
        es = EquationSystem(lat, names, rhs)
        assert is_monotone_es(es)[0]
        # exhaustive confirmation
        vals = [dict(zip(names, c)) for c in itertools.product(lat.elements, repeat=2)]
        for v1 in vals:
            for v2 in vals:
                if all(lat.leq(v1[x], v2[x]) for x in names):
                    w1, w2 = apply_es(es, v1), apply_es(es, v2)
                    assert all(lat.leq(w1[x], w2[x]) for x in names)


def test_free_vars():
    e = Join([Var("X"), Meet([Var("Y"), Var("X")])])
    assert free_vars(e) == {"X", "Y"}
    assert free_vars(Const(True)) == frozenset()
    assert free_vars(Meet([Var("Y"), Var("Z")])) == {"Y", "Z"}


def test_subst():
    e = Join([Var("X"), Var("Z")])
    got = subst(e, "Z", Meet([Var("Y"), Var("X")]))
    assert got == Join([Var("X"), Meet([Var("Y"), Var("X")])])
    assert subst(e, "Z", Var("Z")) == e
    assert subst(Const(True), "Z", Var("Y")) == Const(True)


def test_simplify_absorption(backsub):
    es = backsub.es
    e = Join([Var("Y"), Meet([Var("Y"), Var("X")])])
    assert simplify(es, e) == Var("Y")
    e = Meet([Var("X"), Const(True)])
    assert simplify(es, e) == Var("X")


def test_simplify_preserves_eval():
    rng = random.Random(17)
    lat = FiniteLattice.diamond()
    names = ("A", "B")

    def rand(depth):
        if depth == 0 or rng.random() < 0.3:
            return Var(rng.choice(names)) if rng.random() < 0.6 else Const(
                rng.choice(lat.elements))
        k = Meet if rng.random() < 0.5 else Join
        return k([rand(depth - 1), rand(depth - 1)])

    es = EquationSystem(lat, names, {x: Const(lat.bottom) for x in names})
    for _ in range(200):
        e = rand(3)
        s = simplify(es, e)
        for combo in itertools.product(lat.elements, repeat=2):
            v = dict(zip(names, combo))
            assert eval_expr(es, e, v) == eval_expr(es, s, v)


def test_substitution_lemma():
    # eval(subst(e,y,d), v) = eval(e, v[y := eval(d,v)])
    rng = random.Random(23)
    lat = BOOL
    names = ("X", "Y")
    es = EquationSystem(lat, names, {x: Const(False) for x in names})

    def rand(depth):
        if depth == 0 or rng.random() < 0.3:
            return Var(rng.choice(names)) if rng.random() < 0.6 else Const(
                rng.choice(lat.elements))
        k = Meet if rng.random() < 0.5 else Join
        return k([rand(depth - 1), rand(depth - 1)])

    for _ in range(200):
        e, d = rand(3), rand(2)
        for combo in itertools.product(lat.elements, repeat=2):
            v = dict(zip(names, combo))
            v2 = dict(v)
            v2["Y"] = eval_expr(es, d, v)
            assert eval_expr(es, subst(e, "Y", d), v) == eval_expr(es, e, v2)


@given(st.sets(st.sampled_from(["X", "Y", "Z"]), min_size=0, max_size=3),
       st.integers(0, 7), st.integers(0, 7))
@settings(max_examples=100, deadline=None)
def test_free_vars_soundness(keep, seed1, seed2):
    # valuations agreeing on free_vars(e) evaluate e identically
    rng = random.Random(seed1)
    names = ("X", "Y", "Z")
    es = EquationSystem(BOOL, names, {x: Const(False) for x in names})

    def rand(depth):
        if depth == 0 or rng.random() < 0.3:
            return Var(rng.choice(names))
        k = Meet if rng.random() < 0.5 else Join
        return k([rand(depth - 1), rand(depth - 1)])

    e = rand(3)
    rng2 = random.Random(seed2)
    v1 = {x: rng2.choice((False, True)) for x in names}
    v2 = {x: (v1[x] if x in free_vars(e) else rng2.choice((False, True)))
          for x in names}
    assert eval_expr(es, e, v1) == eval_expr(es, e, v2)


def test_registered_op_rejects_false_certificate():
    neg_table = {(False,): True, (True,): False}
    with pytest.raises(ValueError):
        RegisteredOp("neg", 1, neg_table, monotone=True, lattice=BOOL)
    with pytest.raises(ValueError):
        RegisteredOp("partial", 1, {(False,): True}, monotone=False, lattice=BOOL)


def test_unknown_op_and_arity():
    from fes.errors import ArityMismatch, UnknownOp
    es = _bes({"X": Const(True)})
    with pytest.raises(UnknownOp):
        eval_expr(es, Apply("mystery", (Var("X"),)), {"X": True})
    with pytest.raises(ArityMismatch):
        eval_expr(es, Apply("not", (Var("X"), Var("X"))), {"X": True})


def test_empty_meet_join_are_top_bottom():
    es = _bes({"X": Const(True)})
    assert eval_expr(es, Meet(()), {"X": False}) is True
    assert eval_expr(es, Join(()), {"X": False}) is False
