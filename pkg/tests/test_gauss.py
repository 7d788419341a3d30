import random

import pytest

from fes.errors import (
    MonotonicityRequired,
    NotBooleanLattice,
    OpenSystem,
    PreconditionFailed,
)
from fes.eqs import Const, EquationSystem, Meet, Var, free_vars
from fes.gauss import BesSolution, gauss_solve, local_solve, scc_solve
from fes.lattice import FiniteLattice
from fes.semantics import all_valuations, bottom_valuation, sem
from fes.specs import MU, NU, Fes, spec

from conftest import load

BOOL = FiniteLattice.booleans()


def test_local_solve_mu_eliminates_to_bottom(backsub):
    es = backsub.es
    e = Meet([Var("Y"), Var("X")])
    got = local_solve(es, MU, "X", e)
    assert got == Const(False)


def test_local_solve_nu_join():
    from fes.eqs import Join
    es = load("backsub").es
    e = Join([Var("Y"), Var("X")])
    assert local_solve(es, NU, "Y", e) == Const(True)


def test_local_solve_variable_absent(backsub):
    e = Var("Y")
    got = local_solve(backsub.es, MU, "X", e)
    assert got == Var("Y")
    assert "X" not in free_vars(got)


def test_local_solve_output_never_mentions_variable():
    rng = random.Random(3)
    from fes.checker import GenConfig, gen_instance
    cfg = GenConfig(seed=3, max_vars=4, lattice_families=("bool",))
    for _ in range(100):
        f, _ = gen_instance(cfg, rng)
        for x in f.es.vars:
            got = local_solve(f.es, MU, x, f.es.rhs[x])
            assert x not in free_vars(got)


def test_gauss_backsub_example(backsub):
    sol = gauss_solve(backsub)
    assert sol.valuation == {"X": False, "Y": False, "Z": False}
    ids = {step[0] for step in sol.steps}
    assert ids <= {"LOCAL", "UNFOLD_THM", "PARTIAL"}
    assert ("LOCAL", ("Z",)) in sol.steps


def test_gauss_unfolded_loop():
    sol = gauss_solve(load("loop_nu_mu_unfolded"))
    assert sol.valuation == {"Y": False, "X": False}


def test_gauss_sign_variants():
    assert gauss_solve(load("signs_z_nu")).valuation == {
        "X": False, "Y": False, "Z": False, "W": False}
    assert gauss_solve(load("signs_mixed")).valuation == {
        "X": False, "Y": False, "Z": False, "W": False}


def test_gauss_rejects_non_boolean():
    lat = FiniteLattice.chain(3)
    es = EquationSystem(lat, ("A",), {"A": Const(0)})
    with pytest.raises(NotBooleanLattice):
        gauss_solve(Fes(es, spec((MU, "A"))))


def test_gauss_rejects_open_system(backsub):
    with pytest.raises(OpenSystem):
        gauss_solve(Fes(backsub.es, backsub.spec[:2]))


def test_gauss_rejects_duplicates(backsub):
    f = Fes(backsub.es, backsub.spec + spec((MU, "X")))
    with pytest.raises(PreconditionFailed):
        gauss_solve(f)


def test_gauss_rejects_non_monotone(negated):
    with pytest.raises(MonotonicityRequired):
        gauss_solve(negated)


def test_gauss_equals_sem_on_random_bes():
    from fes.checker import GenConfig, gen_instance
    rng = random.Random(21)
    cfg = GenConfig(seed=21, max_vars=7, lattice_families=("bool",))
    for _ in range(1000):
        f, v = gen_instance(cfg, rng)
        closed = Fes(f.es, tuple(
            (s, x) for s, x in
            zip((rng.choice((MU, NU)) for _ in f.es.vars), f.es.vars)))
        assert gauss_solve(closed).valuation == sem(closed, v)


def test_scc_two_loops():
    b3 = load("two_loops_a")
    assert scc_solve(b3) == {"X": False, "Y": False, "Z": True, "W": True}


def test_scc_single_component(backsub):
    assert scc_solve(backsub) == sem(backsub, bottom_valuation(backsub.es))


def test_scc_requires_monotone(negated):
    with pytest.raises(MonotonicityRequired):
        scc_solve(negated)


def test_scc_equals_sem_on_all_families():
    from fes.checker import GenConfig, gen_instance
    rng = random.Random(42)
    cfg = GenConfig(seed=42, max_vars=5,
                    lattice_families=("bool", "chain3", "chain4", "diamond",
                                      "powerset2", "product"))
    for _ in range(500):
        f, v = gen_instance(cfg, rng)
        assert scc_solve(f, v) == sem(f, v)
