"""Shared fixtures: small Boolean systems exercising every transformation."""

import pytest

from fes.parser import parse

DATA = {
    # solvable exactly by backward substitution + local resolution
    "backsub": """
        lattice bool
        mu X = Y | Z;
        nu Y = Z;
        mu Z = Y & X;
    """,
    # unfolding Y into X here changes the solution (truth) to falsity
    "loop_nu_mu": """
        lattice bool
        nu Y = X;
        mu X = Y;
    """,
    "loop_nu_mu_unfolded": """
        lattice bool
        nu Y = X;
        mu X = X;
    """,
    # two independent loops, orderings with 2 / 2 / 1 / 1 alternations
    "two_loops_a": """
        lattice bool
        mu X = Y;
        mu Y = X;
        nu Z = W;
        mu W = Z;
    """,
    "two_loops_b": """
        lattice bool
        mu X = Y;
        nu Z = W;
        mu Y = X;
        mu W = Z;
    """,
    "two_loops_c": """
        lattice bool
        nu Z = W;
        mu X = Y;
        mu Y = X;
        mu W = Z;
    """,
    "two_loops_d": """
        lattice bool
        mu X = Y;
        mu Y = X;
        mu W = Z;
        nu Z = W;
    """,
    # three sign variants of one system; flipping Y/W is harmless, Z is not
    "signs_mixed": """
        lattice bool
        mu X = Y;
        nu Y = X | Z;
        mu Z = Z & W;
        nu W = X & bot;
    """,
    "signs_z_nu": """
        lattice bool
        mu X = Y;
        nu Y = X | Z;
        nu Z = Z & W;
        nu W = X & bot;
    """,
    "signs_all_mu": """
        lattice bool
        mu X = Y;
        mu Y = X | Z;
        mu Z = Z & W;
        mu W = X & bot;
    """,
    # non-monotone because of the negation
    "negated": """
        lattice bool
        mu X = Y & Z;
        mu Y = X | Z;
        mu Z = !X;
    """,
}


def load(name):
    return parse(DATA[name])


@pytest.fixture
def backsub():
    return load("backsub")


@pytest.fixture
def loop_nu_mu():
    return load("loop_nu_mu")


@pytest.fixture
def negated():
    return load("negated")
