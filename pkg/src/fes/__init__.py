"""Fixpoint equation systems over finite complete lattices."""

from ._kernel import BACKEND_NAME
from .eqs import (
    Apply,
    Const,
    EquationSystem,
    Expr,
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
from .lattice import (
    FiniteLattice,
    is_monotone,
    mu_def,
    mu_iter,
    nu_def,
    nu_iter,
    verify_lattice,
)
from .semantics import check_sanity, check_solution, sem, sem_spec
from .specs import MU, NU, Fes, Sign, agrees_on, alternation_count, disjoint, dom, spec

__version__ = "0.1.0"
