import random

import pytest

from fes.depgraph import SEMANTIC, SYNTACTIC
from fes.errors import MonotonicityRequired, PreconditionFailed
from fes.eqs import Const, Var
from fes.semantics import all_valuations, bottom_valuation, sem, valuation_leq
from fes.specs import MU, NU, Fes, alternation_count, spec
from fes.transforms import (
    EQUAL,
    GEQ,
    LEQ,
    UNKNOWN,
    apply_migrate,
    apply_partial,
    apply_sign_flip,
    apply_split,
    apply_swap,
    apply_unfold,
    reduce_alternations,
    unfold_es,
)

from conftest import load


def _all_equal(f1, f2):
    return all(sem(f1, v) == sem(f2, v) for v in all_valuations(f1.es))


def test_unfold_es_touches_only_target(backsub):
    es2 = unfold_es(backsub.es, "X", "Z")
    assert es2.rhs["Y"] == backsub.es.rhs["Y"]
    assert es2.rhs["Z"] == backsub.es.rhs["Z"]
    assert es2.rhs["X"] != backsub.es.rhs["X"]


def test_unfold_backsub_steps_preserve_sem(backsub):
    rep = apply_unfold(backsub, "X", "Z")
    assert rep.justification == "UNFOLD_THM" and rep.relation == EQUAL
    assert _all_equal(backsub, rep.result)


def test_unfold_precondition_failure_with_witness(loop_nu_mu):
    with pytest.raises(PreconditionFailed) as exc:
        apply_unfold(loop_nu_mu, "X", "Y")
    assert exc.value.witness == ["Y", "X"]


def test_forced_unfold_reproduces_counterexample(loop_nu_mu):
    rep = apply_unfold(loop_nu_mu, "X", "Y", force=True)
    assert rep.relation == UNKNOWN
    v = bottom_valuation(loop_nu_mu.es)
    assert sem(loop_nu_mu, v) == {"X": True, "Y": True}
    assert sem(rep.result, v) == {"X": False, "Y": False}
    # the forced result is the stored unfolded variant
    assert rep.result.es.rhs == load("loop_nu_mu_unfolded").es.rhs


def test_self_unfold_allowed(loop_nu_mu):
    # head variable may be unfolded into itself: nothing binds it afterwards
    f = Fes(loop_nu_mu.es, spec((MU, "X"), (NU, "Y")))
    rep = apply_unfold(f, "X", "X")
    assert rep.justification == "UNFOLD_THM"
    assert _all_equal(f, rep.result)


def test_unfold_requires_monotone(negated):
    with pytest.raises(MonotonicityRequired):
        apply_unfold(negated, "X", "Y")


def test_unfold_random_cases_preserve_sem():
    from fes.checker import GenConfig, run_suite
    cfg = GenConfig(seed=500, cases=500, max_vars=4)
    (res,) = run_suite(cfg, ["UNFOLD"])
    assert res.counterexample is None and res.cases == 500


def test_apply_partial_forward_substitution(backsub):
    v = bottom_valuation(backsub.es)
    rep = apply_partial(backsub, "X", v)
    assert rep.justification == "PARTIAL" and rep.relation == EQUAL
    assert rep.result.es.rhs["X"] == Const(False)
    assert _all_equal(backsub, rep.result)
    # idempotent
    rep2 = apply_partial(rep.result, "X", v)
    assert rep2.result.es.rhs["X"] == Const(False)


def test_swap_same_sign(backsub):
    f = load("two_loops_a")
    rep = apply_swap(f, 0)  # two leading mu entries
    assert rep.justification == "SWAP_SAME" and rep.relation == EQUAL
    assert _all_equal(f, rep.result)


def test_swap_loop():
    b4 = load("two_loops_b")
    b5 = load("two_loops_c")
    rep = apply_swap(b4, 0)  # mu X before nu Z, X does not reach Z
    assert rep.justification == "SWAP_LOOP" and rep.relation == EQUAL
    assert rep.result.spec == b5.spec
    assert _all_equal(b4, rep.result)


def test_swap_blocked_then_inequality():
    b3 = load("two_loops_a")
    # position 1: mu Y then nu Z — Y reaches nothing in {Z}, so loop applies
    rep = apply_swap(b3, 1)
    assert rep.relation == EQUAL
    # mixed-sign adjacent pair on one loop: only the one-sided bound remains
    b6 = load("two_loops_d")
    with pytest.raises(PreconditionFailed):
        apply_swap(b6, 2)  # mu W then nu Z, W reaches Z
    rep = apply_swap(b6, 2, allow_ineq=True)
    # moving the nu entry forward can only raise the solution
    assert rep.justification == "MIG_INEQ" and rep.relation == GEQ
    v = bottom_valuation(b6.es)
    assert valuation_leq(b6.es, sem(b6, v), sem(rep.result, v))


def test_ordering_bound_is_strict_somewhere():
    b3 = load("two_loops_a")
    b6 = load("two_loops_d")
    v = bottom_valuation(b3.es)
    w3, w6 = sem(b3, v), sem(b6, v)
    assert valuation_leq(b3.es, w6, w3)
    assert w6["Z"] != w3["Z"] and w6["W"] != w3["W"]


def test_migrate_blocks():
    b3 = load("two_loops_a")
    b5 = load("two_loops_c")
    rep = apply_migrate(b3, (0, 2), (2, 3))
    assert rep.justification == "MIGRATE_CTX" and rep.relation == EQUAL
    assert rep.result.spec == b5.spec
    assert _all_equal(b3, rep.result)


def test_migrate_single_equation_fails():
    b4 = load("two_loops_b")
    # the head equation depends on the rest and vice versa: no direction works
    with pytest.raises(PreconditionFailed) as exc:
        apply_migrate(b4, (0, 1), (1, 4))
    assert "indep" in str(exc.value)


def test_migrate_empty_block_is_identity(backsub):
    rep = apply_migrate(backsub, (0, 0), (0, 2))
    assert rep.result.spec == backsub.spec
    assert rep.relation == EQUAL


def test_migrate_does_not_require_monotonicity():
    # negation in one block; blocks are mutually independent parts
    from fes.eqs import Apply, EquationSystem, bool_negation
    from fes.lattice import FiniteLattice
    lat = FiniteLattice.booleans()
    es = EquationSystem(
        lat, ("A", "B"),
        {"A": Var("A"), "B": Apply("not", (Var("B"),))},
        {"not": bool_negation(lat)})
    f = Fes(es, spec((MU, "A"), (NU, "B")))
    rep = apply_migrate(f, (0, 1), (1, 2))
    assert rep.relation == EQUAL
    assert _all_equal(f, rep.result)


def test_sign_flip_loop_cases():
    b7 = load("signs_mixed")
    # Y (position 1) and W (position 3) have no self-cycle in their suffixes
    for i, expect_var in ((1, "Y"), (3, "W")):
        rep = apply_sign_flip(b7, i)
        assert rep.justification == "SIGN_LOOP" and rep.relation == EQUAL
        assert _all_equal(b7, rep.result)
    # flipping both reaches the all-mu variant
    step1 = apply_sign_flip(b7, 1).result
    step2 = apply_sign_flip(step1, 3).result
    assert step2.spec == load("signs_all_mu").spec


def test_sign_flip_inequality_case():
    b7 = load("signs_mixed")
    rep = apply_sign_flip(b7, 2)  # Z has a self-loop: only the bound applies
    assert rep.justification == "SIGN_INEQ" and rep.relation == GEQ
    assert rep.result.spec == load("signs_z_nu").spec
    v = bottom_valuation(b7.es)
    assert valuation_leq(b7.es, sem(b7, v), sem(rep.result, v))


def test_sign_flip_ineq_requires_monotone(negated):
    # the negated loop variable has a self-cycle, so only the bound branch
    # remains, and that branch needs monotonicity
    with pytest.raises(MonotonicityRequired):
        apply_sign_flip(negated, 0)


def test_split_both_orders():
    b3 = load("two_loops_a")
    for dep_first in (False, True):
        rep = apply_split(b3, "X", dependent_first=dep_first)
        assert rep.justification == "SPLIT_SOLVE" and rep.relation == EQUAL
        assert _all_equal(b3, rep.result)
    rep = apply_split(b3, "X")
    assert rep.result.spec == spec((NU, "Z"), (MU, "W"), (MU, "X"), (MU, "Y"))


def test_split_missing_variable_is_identity(backsub):
    f = Fes(backsub.es, backsub.spec[:2])
    rep = apply_split(f, "Z")
    assert rep.result.spec == f.spec


def test_reduce_alternations_two_loops():
    b3 = load("two_loops_a")
    assert alternation_count(b3.spec) == 2
    rep = reduce_alternations(b3)
    assert rep.relation == EQUAL
    assert alternation_count(rep.result.spec) == 1
    assert _all_equal(b3, rep.result)


def test_reduce_alternations_stable_when_sorted(backsub):
    f = load("signs_all_mu")
    rep = reduce_alternations(f)
    assert rep.result.spec == f.spec
    assert rep.steps == []


def test_reduce_alternations_never_increases():
    from fes.checker import GenConfig, gen_instance
    rng = random.Random(77)
    cfg = GenConfig(seed=77, max_vars=4, lattice_families=("bool", "chain3"))
    for _ in range(50):
        f, v = gen_instance(cfg, rng)
        rep = reduce_alternations(f)
        assert alternation_count(rep.result.spec) <= alternation_count(f.spec)
        assert sem(f, v) == sem(rep.result, v)
