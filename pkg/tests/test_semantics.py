import random

import pytest

from fes.eqs import Const, EquationSystem, Var, apply_es, is_monotone_es
from fes.lattice import FiniteLattice
from fes.semantics import (
    all_valuations,
    bottom_valuation,
    check_sanity,
    check_solution,
    sem,
    sem_spec,
    valuation_leq,
)
from fes.specs import MU, NU, Fes, spec

from conftest import load

BOOL = FiniteLattice.booleans()


def _val(f, **kw):
    v = bottom_valuation(f.es)
    v.update(kw)
    return v


def test_empty_spec_is_identity():
    es = EquationSystem(BOOL, ("X",), {"X": Const(True)})
    f = Fes(es, ())
    for v in all_valuations(es):
        assert sem(f, v) == v


def test_backsub_example_solution():
    f = load("backsub")
    for v in all_valuations(f.es):
        w = sem(f, v)
        assert (w["X"], w["Y"], w["Z"]) == (False, False, False)


def test_unfold_counterexample_pair():
    b1 = load("loop_nu_mu")
    b2 = load("loop_nu_mu_unfolded")
    w1 = sem(b1, _val(b1))
    w2 = sem(b2, _val(b2))
    assert (w1["Y"], w1["X"]) == (True, True)
    assert (w2["Y"], w2["X"]) == (False, False)


def test_two_loop_orderings():
    expected = {"X": False, "Y": False, "Z": True, "W": True}
    for name in ("two_loops_a", "two_loops_b", "two_loops_c"):
        f = load(name)
        assert sem(f, _val(f)) == expected
    d = load("two_loops_d")
    assert sem(d, _val(d)) == {"X": False, "Y": False, "Z": False, "W": False}


def test_sign_variant_solutions():
    b7 = load("signs_mixed")
    b8 = load("signs_z_nu")
    b9 = load("signs_all_mu")
    w7 = sem(b7, _val(b7))
    w8 = sem(b8, _val(b8))
    w9 = sem(b9, _val(b9))
    assert w7 == w9
    assert valuation_leq(b7.es, w7, w8)
    assert w7 == {"X": False, "Y": False, "Z": False, "W": False}
    assert w8 == {"X": False, "Y": False, "Z": False, "W": False}


def test_head_equation_is_outermost():
    # nu-head over a mu-tail of the same loop solves to top; reversing the
    # nesting solves to bottom
    es = EquationSystem(BOOL, ("X", "Y"),
                        {"X": Var("Y"), "Y": Var("X")})
    up = sem(Fes(es, spec((NU, "X"), (MU, "Y"))), {"X": False, "Y": False})
    down = sem(Fes(es, spec((MU, "Y"), (NU, "X"))), {"X": False, "Y": False})
    assert up == {"X": True, "Y": True}
    assert down == {"X": False, "Y": False}


def test_duplicate_spec_entries_inner_binding_wins():
    es = EquationSystem(BOOL, ("X",), {"X": Var("X")})
    # the later (inner) entry determines the value; the outer one collapses
    f = Fes(es, spec((NU, "X"), (MU, "X")))
    assert sem(f, {"X": True})["X"] is False
    f = Fes(es, spec((MU, "X"), (NU, "X")))
    assert sem(f, {"X": False})["X"] is True


def test_non_monotone_system_still_solves(negated):
    # fixpoints of arbitrary functions are defined via pre/post-fixpoint bounds
    w = sem(negated, _val(negated))
    assert set(w) == {"X", "Y", "Z"}


def test_sem_spec_override(loop_nu_mu):
    es = loop_nu_mu.es
    w = sem_spec(es, spec((MU, "Y"), (NU, "X")), {"X": False, "Y": False})
    assert (w["X"], w["Y"]) == (False, False)


def test_check_sanity_clean(backsub):
    samples = list(all_valuations(backsub.es))[:4]
    assert check_sanity(backsub, samples) == []


def test_check_sanity_open_system():
    es = EquationSystem(BOOL, ("X", "P"), {"X": Var("P"), "P": Var("P")})
    f = Fes(es, spec((MU, "X")))
    assert check_sanity(f, list(all_valuations(es))) == []
    # unbound P keeps its input value
    assert sem(f, {"X": False, "P": True}) == {"X": True, "P": True}


def test_check_solution(backsub):
    assert check_solution(backsub, bottom_valuation(backsub.es))
    f = load("two_loops_a")
    assert check_solution(f, bottom_valuation(f.es))


def test_check_solution_requires_monotone(negated):
    from fes.errors import MonotonicityRequired
    with pytest.raises(MonotonicityRequired):
        check_solution(negated, bottom_valuation(negated.es))


def test_sem_monotone_in_valuation():
    # for monotone systems, sem is monotone in the input valuation
    from fes.checker import GenConfig, gen_instance
    rng = random.Random(31)
    cfg = GenConfig(seed=31, max_vars=3, lattice_families=("bool", "chain3"))
    for _ in range(50):
        f, _ = gen_instance(cfg, rng)
        lat = f.es.lattice
        vals = list(all_valuations(f.es))
        for v1 in vals:
            v2 = {x: lat.top for x in f.es.vars}
            if valuation_leq(f.es, v1, v2):
                assert valuation_leq(f.es, sem(f, v1), sem(f, v2))


def test_eval_budget_guard():
    from fes.errors import SizeGuardExceeded
    f = load("two_loops_a")
    with pytest.raises(SizeGuardExceeded):
        sem(f, bottom_valuation(f.es), max_evals=3)
