"""Randomized falsification harness for the fixpoint and reordering laws.

Every algebraic law the library relies on is expressed as an executable
property checked against the reference semantics on randomly generated
lattices, systems, and specifications.  Properties with non-trivial
hypotheses use hypothesis-aware generators plus rejection sampling; failures
are shrunk (dropping spec entries, shrinking right-hand sides) while
re-checking the hypothesis after every step, so a reported counterexample is
both small and a genuine violation.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field

from .depgraph import SEMANTIC, SYNTACTIC, build_graph, indep, reaches, reaches_nonempty
from .eqs import Const, EquationSystem, Join, Meet, Var, eval_expr, is_monotone_es
from .errors import MonotonicityRequired, PreconditionFailed
from .lattice import (
    FiniteLattice,
    mu_def,
    nu_def,
    random_monotone_fn,
    random_monotone_fn2,
)
from .semantics import sem, valuation_leq
from .specs import MU, NU, Fes, dom
from .transforms import (
    EQUAL,
    GEQ,
    LEQ,
    apply_migrate,
    apply_partial,
    apply_sign_flip,
    apply_split,
    apply_swap,
    apply_unfold,
    unfold_es,
)

RETRY_CAP = 10_000
SHRINK_CAP = 200

# mutation hooks: deliberately broken generators, used to demonstrate that
# the suite can fail (see run_suite's `mutate` argument)
MUTATE_MIGRATION_NO_INDEP = "MIGRATION-NO-INDEP"
MUTATE_UNFOLD_FORCE = "UNFOLD-FORCE"


class HypothesisStarvation(UserWarning):
    """A property's preconditions could not be met within the retry cap."""


def _product_lattice() -> FiniteLattice:
    # two-point lattice times a three-element chain, with flat element names
    # so values survive the text format
    combos = [(x, y) for x in (False, True) for y in (0, 1, 2)]
    name = {c: f"p{int(c[0])}{c[1]}" for c in combos}
    els = tuple(name[c] for c in combos)
    pairs = [
        (name[(x1, y1)], name[(x2, y2)])
        for (x1, y1) in combos
        for (x2, y2) in combos
        if (x2 or not x1) and y1 <= y2
    ]
    return FiniteLattice(els, pairs, name="boolxchain3")


LATTICE_FAMILIES = {
    "bool": FiniteLattice.booleans,
    "chain2": lambda: FiniteLattice.chain(2),
    "chain3": lambda: FiniteLattice.chain(3),
    "chain4": lambda: FiniteLattice.chain(4),
    "powerset1": lambda: FiniteLattice.powerset(1),
    "powerset2": lambda: FiniteLattice.powerset(2),
    "powerset3": lambda: FiniteLattice.powerset(3),
    "diamond": FiniteLattice.diamond,
    "product": _product_lattice,
}

DEFAULT_FAMILIES = ("bool", "chain3", "diamond", "powerset2")


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    cases: int = 200
    max_vars: int = 5
    lattice_families: tuple = DEFAULT_FAMILIES
    graph_mode: str = SYNTACTIC

    def __post_init__(self):
        fams = self.lattice_families
        if isinstance(fams, str):
            fams = tuple(f.strip() for f in fams.split(",") if f.strip())
            object.__setattr__(self, "lattice_families", fams)
        for f in self.lattice_families:
            if f not in LATTICE_FAMILIES:
                raise ValueError(f"unknown lattice family {f!r}")
        if not self.lattice_families:
            raise ValueError("at least one lattice family required")
        if not 1 <= self.max_vars <= 7:
            raise ValueError("max_vars must be between 1 and 7")
        if not -(2 ** 63) <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")
        if self.graph_mode not in (SYNTACTIC, SEMANTIC):
            raise ValueError(f"unknown graph mode {self.graph_mode!r}")


@dataclass
class Counterexample:
    fes: Fes | None
    valuation: dict | None
    details: str


@dataclass
class PropertyResult:
    property: str
    cases: int
    counterexample: Counterexample | None = None
    starved: int = 0


# ---------------------------------------------------------------------------
# generation

def _rand_lattice(rng, cfg) -> FiniteLattice:
    return LATTICE_FAMILIES[rng.choice(cfg.lattice_families)]()


def _rand_expr(rng, lat, names, depth):
    """Random expression over meet/join/const/var — monotone by construction."""
    r = rng.random()
    if depth <= 0 or r < 0.4 or not names:
        if names and rng.random() < 0.6:
            return Var(rng.choice(names))
        return Const(rng.choice(lat.elements))
    kind = Meet if rng.random() < 0.5 else Join
    return kind([_rand_expr(rng, lat, names, depth - 1) for _ in range(2)])


def _signed(rng, names):
    return tuple((rng.choice((MU, NU)), x) for x in names)


def _gen_fes(rng, cfg, min_vars=1, full_spec=False):
    lat = _rand_lattice(rng, cfg)
    n = rng.randint(min_vars, max(min_vars, cfg.max_vars))
    names = tuple(f"V{i}" for i in range(n))
    rhs = {x: _rand_expr(rng, lat, names, 2) for x in names}
    es = EquationSystem(lat, names, rhs)
    k = n if full_spec else rng.randint(0, n)
    chosen = rng.sample(names, k)
    v = {x: rng.choice(lat.elements) for x in names}
    return Fes(es, _signed(rng, chosen)), v


def gen_instance(cfg: GenConfig, rng=None):
    """One random monotone system, spec, and valuation; deterministic in cfg."""
    if rng is None:
        rng = random.Random(cfg.seed)
    return _gen_fes(rng, cfg)


def _gen_blocks(rng, cfg):
    """A system split into an independent block A and a free block B.

    Right-hand sides of A variables only mention A variables, so any spec
    over A is independent of any spec over B by construction.
    """
    lat = _rand_lattice(rng, cfg)
    n = rng.randint(2, max(2, cfg.max_vars))
    names = tuple(f"V{i}" for i in range(n))
    split = rng.randint(1, n - 1)
    a, b = names[:split], names[split:]
    rhs = {x: _rand_expr(rng, lat, a, 2) for x in a}
    rhs.update({x: _rand_expr(rng, lat, names, 2) for x in b})
    es = EquationSystem(lat, names, rhs)
    v = {x: rng.choice(lat.elements) for x in names}
    s1 = _signed(rng, rng.sample(a, rng.randint(1, len(a))))
    s2 = _signed(rng, rng.sample(b, rng.randint(1, len(b))))
    return es, a, b, s1, s2, v


# ---------------------------------------------------------------------------
# pointwise fixpoint laws on random small lattices

_SMALL_POOL = (
    FiniteLattice.booleans,
    lambda: FiniteLattice.chain(3),
    lambda: FiniteLattice.chain(4),
    lambda: FiniteLattice.chain(5),
    FiniteLattice.diamond,
    lambda: FiniteLattice.powerset(2),
)


def _small_lattice(rng):
    return rng.choice(_SMALL_POOL)()


def _sigma(sign, lat, f):
    return mu_def(lat, f) if sign == MU else nu_def(lat, f)


def _law_computation(rng):
    lat = _small_lattice(rng)
    f = random_monotone_fn(lat, rng)
    for s in (MU, NU):
        p = _sigma(s, lat, f)
        if f[p] != p:
            return f"{s}: f(fix)={f[p]!r} != fix={p!r} on {lat.name}"
    return None


def _law_constant(rng):
    lat = _small_lattice(rng)
    a = rng.choice(lat.elements)
    for s in (MU, NU):
        p = _sigma(s, lat, lambda _x: a)
        if p != a:
            return f"{s} of constant {a!r} gave {p!r} on {lat.name}"
    return None


def _law_rolling(rng):
    lat = _small_lattice(rng)
    f = random_monotone_fn(lat, rng)
    g = random_monotone_fn(lat, rng)
    for s in (MU, NU):
        lhs = _sigma(s, lat, lambda x: f[g[x]])
        rhs = f[_sigma(s, lat, lambda x: g[f[x]])]
        if lhs != rhs:
            return f"{s}: fix(f.g)={lhs!r} != f(fix(g.f))={rhs!r} on {lat.name}"
    return None


def _law_square(rng):
    lat = _small_lattice(rng)
    f = random_monotone_fn(lat, rng)
    for s in (MU, NU):
        lhs = _sigma(s, lat, lambda x: f[f[x]])
        rhs = _sigma(s, lat, f)
        if lhs != rhs:
            return f"{s}: fix(f.f)={lhs!r} != fix(f)={rhs!r} on {lat.name}"
    return None


def _law_fix_monotone(rng):
    lat = _small_lattice(rng)
    a = random_monotone_fn(lat, rng)
    b = random_monotone_fn(lat, rng)
    lo = {x: lat.meet(a[x], b[x]) for x in lat.elements}
    hi = {x: lat.join(a[x], b[x]) for x in lat.elements}
    for s in (MU, NU):
        if not lat.leq(_sigma(s, lat, lo), _sigma(s, lat, hi)):
            return f"{s}: fix not monotone in the function on {lat.name}"
    return None


def _law_diagonal(rng):
    lat = _small_lattice(rng)
    h = random_monotone_fn2(lat, rng)
    for s in (MU, NU):
        lhs = _sigma(s, lat, lambda x: h[(x, x)])
        rhs = _sigma(s, lat, lambda x: _sigma(s, lat, lambda y: h[(x, y)]))
        if lhs != rhs:
            return f"{s}: diagonal {lhs!r} != nested {rhs!r} on {lat.name}"
    return None


def _law_unfolding(rng):
    lat = _small_lattice(rng)
    h = random_monotone_fn2(lat, rng)
    for s in (MU, NU):
        lhs = _sigma(s, lat, lambda x: h[(x, x)])
        rhs = _sigma(s, lat, lambda x: h[(x, h[(x, x)])])
        if lhs != rhs:
            return f"{s}: unfolding {lhs!r} != {rhs!r} on {lat.name}"
    return None


def _law_solve(rng):
    lat = _small_lattice(rng)
    h = random_monotone_fn2(lat, rng)
    for s in (MU, NU):
        a = _sigma(s, lat, lambda x: h[(x, x)])
        rhs = _sigma(s, lat, lambda x: h[(x, a)])
        if a != rhs:
            return f"{s}: solve {a!r} != {rhs!r} on {lat.name}"
    return None


def _law_bekic(rng):
    lat = _small_lattice(rng)
    h = random_monotone_fn2(lat, rng)
    k = random_monotone_fn2(lat, rng)
    for s in (MU, NU):
        lhs = _sigma(s, lat, lambda x: h[(x, _sigma(s, lat, lambda y: k[(y, x)]))])
        rhs = _sigma(
            s, lat,
            lambda x: h[(x, _sigma(
                s, lat,
                lambda y: k[(y, _sigma(s, lat, lambda z: h[(z, y)]))]))])
        if lhs != rhs:
            return f"{s}: nested-swap {lhs!r} != {rhs!r} on {lat.name}"
    return None


def _law_mu_leq_nu(rng):
    lat = _small_lattice(rng)
    f = random_monotone_fn(lat, rng)
    if not lat.leq(mu_def(lat, f), nu_def(lat, f)):
        return f"least fixpoint above greatest on {lat.name}"
    return None


def _law_identity_bounds(rng):
    lat = _small_lattice(rng)
    a = rng.choice(lat.elements)
    if not lat.leq(mu_def(lat, lambda x: x), a):
        return f"mu(id) not below {a!r} on {lat.name}"
    if not lat.leq(a, nu_def(lat, lambda x: x)):
        return f"nu(id) not above {a!r} on {lat.name}"
    return None


def _law_mu_nu_exchange(rng):
    lat = _small_lattice(rng)
    h = random_monotone_fn2(lat, rng)
    lhs = mu_def(lat, lambda x: nu_def(lat, lambda y: h[(x, y)]))
    rhs = nu_def(lat, lambda y: mu_def(lat, lambda x: h[(x, y)]))
    if not lat.leq(lhs, rhs):
        return f"mu-nu {lhs!r} not below nu-mu {rhs!r} on {lat.name}"
    return None


def _law_bekic_ineq(rng):
    lat = _small_lattice(rng)
    h = random_monotone_fn2(lat, rng)
    k = random_monotone_fn2(lat, rng)
    lhs = mu_def(lat, lambda x: h[(x, nu_def(lat, lambda y: k[(y, x)]))])
    rhs = mu_def(
        lat,
        lambda x: h[(x, nu_def(
            lat, lambda y: k[(y, mu_def(lat, lambda z: h[(z, y)]))]))])
    if not lat.leq(lhs, rhs):
        return f"mu/nu nested-swap bound violated: {lhs!r} > {rhs!r} on {lat.name}"
    lhs = nu_def(lat, lambda x: h[(x, mu_def(lat, lambda y: k[(y, x)]))])
    rhs = nu_def(
        lat,
        lambda x: h[(x, mu_def(
            lat, lambda y: k[(y, nu_def(lat, lambda z: h[(z, y)]))]))])
    if not lat.leq(rhs, lhs):
        return f"nu/mu nested-swap bound violated: {lhs!r} < {rhs!r} on {lat.name}"
    return None


# ---------------------------------------------------------------------------
# system-level properties: cases are dicts; gen may return None (hypothesis
# not met, resample), check returns a failure description or None

def _vals_equal(es, v1, v2):
    return all(v1[x] == v2[x] for x in es.vars)


def _monotone(case):
    return is_monotone_es(case["fes"].es)[0]


def _gen_sanity1(rng, cfg, mutate):
    f, v = _gen_fes(rng, cfg)
    if set(f.es.vars) <= dom(f.spec):
        return None
    return {"fes": f, "v": v}


def _check_sanity1(case):
    f, v = case["fes"], case["v"]
    w = sem(f, v)
    for x in f.es.vars:
        if x not in dom(f.spec) and w[x] != v[x]:
            return f"unbound {x} changed from {v[x]!r} to {w[x]!r}"
    return None


def _hyp_sanity1(case):
    return not set(case["fes"].es.vars) <= dom(case["fes"].spec)


def _gen_sanity2(rng, cfg, mutate):
    f, v = _gen_fes(rng, cfg)
    outside = [x for x in f.es.vars if x not in dom(f.spec)]
    if not outside:
        return None
    x = rng.choice(outside)
    rhs2 = _rand_expr(rng, f.es.lattice, f.es.vars, 2)
    return {"fes": f, "v": v, "x": x, "rhs2": rhs2}


def _check_sanity2(case):
    f, v = case["fes"], case["v"]
    f2 = Fes(f.es.with_rhs(case["x"], case["rhs2"]), f.spec)
    if not _vals_equal(f.es, sem(f, v), sem(f2, v)):
        return f"rewriting the unused equation of {case['x']} changed the solution"
    return None


def _hyp_sanity2(case):
    return case["x"] not in dom(case["fes"].spec)


def _gen_sanity3(rng, cfg, mutate):
    f, v = _gen_fes(rng, cfg)
    if not f.spec:
        return None
    v2 = dict(v)
    for x in dom(f.spec):
        v2[x] = rng.choice(f.es.lattice.elements)
    if v2 == v:
        return None
    return {"fes": f, "v": v, "v2": v2}


def _check_sanity3(case):
    f = case["fes"]
    if not _vals_equal(f.es, sem(f, case["v"]), sem(f, case["v2"])):
        return "input change on bound variables altered the solution"
    return None


def _hyp_sanity3(case):
    f = case["fes"]
    d = dom(f.spec)
    return all(case["v"][x] == case["v2"][x] for x in f.es.vars if x not in d)


def _gen_solution(rng, cfg, mutate):
    f, v = _gen_fes(rng, cfg)
    if not f.spec:
        return None
    return {"fes": f, "v": v}


def _check_solution(case):
    f, v = case["fes"], case["v"]
    w = sem(f, v)
    for x in dom(f.spec):
        got = eval_expr(f.es, f.es.rhs[x], w)
        if got != w[x]:
            return f"solution does not satisfy the equation for {x}: {got!r} != {w[x]!r}"
    return None


def _gen_congr_l(rng, cfg, mutate):
    # shared prefix spec S; tails differ by a same-sign swap; equations differ
    # only on a variable bound nowhere, so the tails solve identically
    f, v = _gen_fes(rng, cfg, min_vars=2)
    es = f.es
    free = [x for x in es.vars if x not in dom(f.spec)]
    if not free or len(f.spec) < 1:
        return None
    x = rng.choice(free)
    es2 = es.with_rhs(x, _rand_expr(rng, es.lattice, es.vars, 2))
    cut = rng.randint(0, len(f.spec))
    s, s1 = f.spec[:cut], f.spec[cut:]
    s2 = s1
    for i in range(len(s1) - 1):
        if s1[i][0] == s1[i + 1][0]:
            t = list(s1)
            t[i], t[i + 1] = t[i + 1], t[i]
            s2 = tuple(t)
            break
    return {"fes": f, "es2": es2, "s": s, "s1": s1, "s2": s2, "v": v,
            "noshrink": True}


def _check_congr_l(case):
    f, es2 = case["fes"], case["es2"]
    s, s1, s2, v = case["s"], case["s1"], case["s2"], case["v"]
    pre1 = sem(Fes(f.es, s1), v)
    pre2 = sem(Fes(es2, s2), v)
    if not _vals_equal(f.es, pre1, pre2):
        return "premise failed: the two tails do not solve identically"
    w1 = sem(Fes(f.es, s + s1), v)
    w2 = sem(Fes(es2, s + s2), v)
    if not _vals_equal(f.es, w1, w2):
        return "equal tails under a common prefix solved differently"
    return None


def _gen_congr_l_ineq(rng, cfg, mutate):
    # tails mu X;R vs nu X;R are ordered pointwise; prefixing S must keep the order
    f, v = _gen_fes(rng, cfg)
    es = f.es
    x = rng.choice(es.vars)
    cut = rng.randint(0, len(f.spec))
    s, r = f.spec[:cut], f.spec[cut:]
    return {"fes": Fes(es, s + ((MU, x),) + r), "v": v, "x": x, "cut": cut,
            "noshrink": True}


def _check_congr_l_ineq(case):
    f, v, cut = case["fes"], case["v"], case["cut"]
    es = f.es
    lo = sem(f, v)
    hi_spec = f.spec[:cut] + ((NU, case["x"]),) + f.spec[cut + 1:]
    hi = sem(Fes(es, hi_spec), v)
    if not valuation_leq(es, lo, hi):
        return f"mu-tail solution not below nu-tail solution at {case['x']}"
    return None


def _gen_congr_r(rng, cfg, mutate):
    # independent block before a shared suffix: swapping two same-sign
    # entries and rewriting an unused equation must not change the solution
    es, a, b, s1, s2, v = _gen_blocks(rng, cfg)
    if len(s1) < 2:
        return None
    i = rng.randrange(len(s1) - 1)
    if s1[i][0] != s1[i + 1][0]:
        return None
    t = list(s1)
    t[i], t[i + 1] = t[i + 1], t[i]
    s1b = tuple(t)
    es2 = es
    unused = [x for x in a if x not in dom(s1)]
    if unused:
        w = rng.choice(unused)
        es2 = es.with_rhs(w, _rand_expr(rng, es.lattice, a, 2))
    return {"fes": Fes(es, s1 + s2), "es2": es2, "s1": s1, "s1b": s1b,
            "s2": s2, "v": v, "noshrink": True}


def _check_congr_r(case):
    es, es2, v = case["fes"].es, case["es2"], case["v"]
    s1, s1b, s2 = case["s1"], case["s1b"], case["s2"]
    if not _vals_equal(es, sem(Fes(es, s1), v), sem(Fes(es2, s1b), v)):
        return "premise failed: the two leading blocks do not solve identically"
    w1 = sem(Fes(es, s1 + s2), v)
    w2 = sem(Fes(es2, s1b + s2), v)
    if not _vals_equal(es, w1, w2):
        return "equal leading blocks before a shared suffix solved differently"
    return None


def _gen_indepsolve(rng, cfg, mutate):
    es, a, b, s1, s2, v = _gen_blocks(rng, cfg)
    return {"fes": Fes(es, s1 + s2), "k": len(s1), "v": v, "noshrink": True}


def _check_indepsolve(case):
    f, v, k = case["fes"], case["v"], case["k"]
    s1, s2 = f.spec[:k], f.spec[k:]
    whole = sem(f, v)
    staged = sem(Fes(f.es, s2), sem(Fes(f.es, s1), v))
    if not _vals_equal(f.es, whole, staged):
        return "solving the independent prefix first gave a different answer"
    return None


def _gen_indepsolve2(rng, cfg, mutate):
    es, a, b, s1, s2, v = _gen_blocks(rng, cfg)
    # here the *second* block is the independent one
    return {"fes": Fes(es, s2 + s1), "k": len(s2), "v": v, "noshrink": True}


def _check_indepsolve2(case):
    f, v, k = case["fes"], case["v"], case["k"]
    s1, s2 = f.spec[:k], f.spec[k:]
    whole = sem(f, v)
    staged = sem(Fes(f.es, s1), sem(Fes(f.es, s2), v))
    if not _vals_equal(f.es, whole, staged):
        return "solving the independent suffix first gave a different answer"
    return None


def _positional_unfold_ok(f, x, y):
    s = f.spec
    for i, (_, v) in enumerate(s):
        if v == y and x not in dom(s[i + 1:]):
            return True
    return False


def _gen_unfold(rng, cfg, mutate):
    f, v = _gen_fes(rng, cfg)
    if not f.spec:
        return None
    if mutate == MUTATE_UNFOLD_FORCE:
        y = rng.choice(list(dom(f.spec)))
        x = rng.choice(f.es.vars)
        return {"fes": f, "v": v, "x": x, "y": y, "force": True}
    i = rng.randrange(len(f.spec))
    y = f.spec[i][1]
    candidates = [x for x in f.es.vars if x not in dom(f.spec[i + 1:])]
    if not candidates:
        return None
    x = rng.choice(candidates)
    return {"fes": f, "v": v, "x": x, "y": y}


def _check_unfold(case):
    f, v, x, y = case["fes"], case["v"], case["x"], case["y"]
    if case.get("force"):
        f2 = Fes(unfold_es(f.es, x, y), f.spec)
        if not _vals_equal(f.es, sem(f, v), sem(f2, v)):
            return f"forced unfold of {y} into {x} changed the solution"
        return None
    rep = apply_unfold(f, x, y)
    if rep.relation != EQUAL:
        return f"unfold reported relation {rep.relation}, expected EQUAL"
    if not _vals_equal(f.es, sem(f, v), sem(rep.result, v)):
        return f"unfolding {y} into {x} changed the solution"
    return None


def _hyp_unfold(case):
    if case.get("force"):
        return True
    return (_positional_unfold_ok(case["fes"], case["x"], case["y"])
            and _monotone(case))


def _gen_unfold_loop(rng, cfg, mutate):
    f, v = _gen_fes(rng, cfg)
    if not f.spec:
        return None
    g = build_graph(f, cfg.graph_mode)
    pairs = [(x, y) for y in g.nodes for x in f.es.vars if not reaches(g, y, x)]
    if not pairs:
        return None
    x, y = rng.choice(pairs)
    return {"fes": f, "v": v, "x": x, "y": y, "mode": cfg.graph_mode}


def _check_unfold_loop(case):
    f, v, x, y = case["fes"], case["v"], case["x"], case["y"]
    rep = apply_unfold(f, x, y, case["mode"])
    if rep.relation != EQUAL:
        return f"unfold reported relation {rep.relation}, expected EQUAL"
    if not _vals_equal(f.es, sem(f, v), sem(rep.result, v)):
        return f"acyclic unfold of {y} into {x} changed the solution"
    return None


def _hyp_unfold_loop(case):
    f, x, y = case["fes"], case["x"], case["y"]
    if y not in dom(f.spec) or not _monotone(case):
        return False
    g = build_graph(f, case["mode"])
    return not reaches(g, y, x)


def _gen_partial(rng, cfg, mutate):
    f, v = _gen_fes(rng, cfg)
    return {"fes": f, "v": v, "x": rng.choice(f.es.vars)}


def _check_partial(case):
    f, v, x = case["fes"], case["v"], case["x"]
    rep = apply_partial(f, x, v)
    if not _vals_equal(f.es, sem(f, v), sem(rep.result, v)):
        return f"replacing the equation of {x} by its solution value changed sem"
    return None


def _hyp_partial(case):
    return case["x"] in case["fes"].es.vars and _monotone(case)


def _adjacent(f, x, y):
    """Position of the adjacent spec pair binding x then y, or None."""
    for i in range(len(f.spec) - 1):
        if f.spec[i][1] == x and f.spec[i + 1][1] == y:
            return i
    return None


def _gen_swap_same(rng, cfg, mutate):
    f, v = _gen_fes(rng, cfg)
    pairs = [i for i in range(len(f.spec) - 1) if f.spec[i][0] == f.spec[i + 1][0]]
    if not pairs:
        return None
    i = rng.choice(pairs)
    return {"fes": f, "v": v, "x": f.spec[i][1], "y": f.spec[i + 1][1]}


def _check_swap_same(case):
    f, v = case["fes"], case["v"]
    i = _adjacent(f, case["x"], case["y"])
    rep = apply_swap(f, i)
    if rep.justification != "SWAP_SAME" or rep.relation != EQUAL:
        return f"expected SWAP_SAME/EQUAL, got {rep.justification}/{rep.relation}"
    if not _vals_equal(f.es, sem(f, v), sem(rep.result, v)):
        return f"swapping same-sign {case['x']},{case['y']} changed the solution"
    return None


def _hyp_swap_same(case):
    f = case["fes"]
    i = _adjacent(f, case["x"], case["y"])
    return i is not None and f.spec[i][0] == f.spec[i + 1][0] and _monotone(case)


def _gen_swap_loop(rng, cfg, mutate):
    f, v = _gen_fes(rng, cfg)
    for i in rng.sample(range(max(len(f.spec) - 1, 0)), max(len(f.spec) - 1, 0)):
        if f.spec[i][0] == f.spec[i + 1][0]:
            continue
        g = build_graph(Fes(f.es, f.spec[i:]), cfg.graph_mode)
        if not reaches(g, f.spec[i][1], f.spec[i + 1][1]):
            return {"fes": f, "v": v, "x": f.spec[i][1], "y": f.spec[i + 1][1],
                    "mode": cfg.graph_mode}
    return None


def _check_swap_loop(case):
    f, v = case["fes"], case["v"]
    i = _adjacent(f, case["x"], case["y"])
    rep = apply_swap(f, i, case["mode"])
    if rep.relation != EQUAL:
        return f"expected EQUAL, got {rep.relation}"
    if not _vals_equal(f.es, sem(f, v), sem(rep.result, v)):
        return f"swapping unlinked {case['x']},{case['y']} changed the solution"
    return None


def _hyp_swap_loop(case):
    f = case["fes"]
    i = _adjacent(f, case["x"], case["y"])
    if i is None or f.spec[i][0] == f.spec[i + 1][0]:
        return False
    g = build_graph(Fes(f.es, f.spec[i:]), case["mode"])
    return not reaches(g, case["x"], case["y"])


def _gen_migration(rng, cfg, mutate):
    if mutate == MUTATE_MIGRATION_NO_INDEP:
        f, v = _gen_fes(rng, cfg, min_vars=2, full_spec=True)
        if len(f.spec) < 2:
            return None
        # force mixed signs so reordering has a chance to matter
        s = list(f.spec)
        s[0] = (MU, s[0][1])
        s[1] = (NU, s[1][1])
        f = Fes(f.es, tuple(s))
        k = rng.randint(1, len(f.spec) - 1)
        return {"fes": f, "v": v, "k": k, "force": True, "noshrink": True}
    es, a, b, s1, s2, v = _gen_blocks(rng, cfg)
    return {"fes": Fes(es, s1 + s2), "k": len(s1), "v": v, "mode": cfg.graph_mode,
            "noshrink": True}


def _check_migration(case):
    f, v, k = case["fes"], case["v"], case["k"]
    if case.get("force"):
        rep = apply_migrate(f, (0, k), (k, len(f.spec)), force=True)
    else:
        rep = apply_migrate(f, (0, k), (k, len(f.spec)), case["mode"])
        if rep.justification != "MIGRATE" or rep.relation != EQUAL:
            return f"expected MIGRATE/EQUAL, got {rep.justification}/{rep.relation}"
    if not _vals_equal(f.es, sem(f, v), sem(rep.result, v)):
        return "exchanging independent blocks changed the solution"
    return None


def _gen_migration2(rng, cfg, mutate):
    es, a, b, s1, s2, v = _gen_blocks(rng, cfg)
    # split the B block into a migrated middle and a fixed tail, and add an
    # arbitrary (possibly overlapping) prefix
    cut = rng.randint(0, len(s2))
    mid, tail = s2[:cut], s2[cut:]
    if not mid:
        return None
    prefix = _signed(rng, [rng.choice(es.vars) for _ in range(rng.randint(0, 2))])
    spec = prefix + s1 + mid + tail
    return {"fes": Fes(es, spec), "a": len(prefix), "b": len(prefix) + len(s1),
            "c": len(prefix) + len(s1) + len(mid), "v": v,
            "mode": cfg.graph_mode, "noshrink": True}


def _check_migration2(case):
    f, v = case["fes"], case["v"]
    rep = apply_migrate(f, (case["a"], case["b"]), (case["b"], case["c"]),
                        case["mode"])
    if rep.relation != EQUAL:
        return f"expected EQUAL, got {rep.relation}"
    if not _vals_equal(f.es, sem(f, v), sem(rep.result, v)):
        return "exchanging independent blocks inside a context changed the solution"
    return None


def _gen_splitsolve(rng, cfg, mutate):
    f, v = _gen_fes(rng, cfg)
    if not f.spec:
        return None
    return {"fes": f, "v": v, "x": rng.choice(list(dom(f.spec))),
            "mode": cfg.graph_mode}


def _check_splitsolve(case):
    f, v, x = case["fes"], case["v"], case["x"]
    base = sem(f, v)
    for dep_first in (False, True):
        rep = apply_split(f, x, case["mode"], dependent_first=dep_first)
        if not _vals_equal(f.es, base, sem(rep.result, v)):
            return f"split on {x} (dependent_first={dep_first}) changed the solution"
    return None


def _hyp_splitsolve(case):
    return case["x"] in case["fes"].es.vars and _monotone(case)


def _gen_sign_loop(rng, cfg, mutate):
    f, v = _gen_fes(rng, cfg)
    n = len(f.spec)
    for i in rng.sample(range(n), n):
        x = f.spec[i][1]
        if x in dom(f.spec[i + 1:]):
            continue
        g = build_graph(Fes(f.es, f.spec[i:]), cfg.graph_mode)
        if not reaches_nonempty(g, x, x):
            return {"fes": f, "v": v, "x": x, "mode": cfg.graph_mode}
    return None


def _check_sign_loop(case):
    f, v, x = case["fes"], case["v"], case["x"]
    i = max(j for j, e in enumerate(f.spec) if e[1] == x)
    rep = apply_sign_flip(f, i, case["mode"])
    if rep.justification != "SIGN_LOOP" or rep.relation != EQUAL:
        return f"expected SIGN_LOOP/EQUAL, got {rep.justification}/{rep.relation}"
    if not _vals_equal(f.es, sem(f, v), sem(rep.result, v)):
        return f"flipping the sign of self-independent {x} changed the solution"
    return None


def _hyp_sign_loop(case):
    f, x = case["fes"], case["x"]
    occ = [j for j, e in enumerate(f.spec) if e[1] == x]
    if not occ:
        return False
    i = occ[-1]
    g = build_graph(Fes(f.es, f.spec[i:]), case["mode"])
    return not reaches_nonempty(g, x, x)


def _gen_sign_ineq(rng, cfg, mutate):
    f, v = _gen_fes(rng, cfg)
    if not f.spec:
        return None
    return {"fes": f, "v": v, "i": rng.randrange(len(f.spec)),
            "mode": cfg.graph_mode, "noshrink": True}


def _check_sign_ineq(case):
    f, v, i = case["fes"], case["v"], case["i"]
    sign = f.spec[i][0]
    rep = apply_sign_flip(f, i, case["mode"])
    base, flipped = sem(f, v), sem(rep.result, v)
    lo, hi = (base, flipped) if sign == MU else (flipped, base)
    if not valuation_leq(f.es, lo, hi):
        return f"flipping {sign} at position {i} moved the solution the wrong way"
    return None


def _gen_mig_ineq(rng, cfg, mutate):
    f, v = _gen_fes(rng, cfg)
    pairs = [i for i in range(len(f.spec) - 1)
             if f.spec[i][0] != f.spec[i + 1][0]]
    if not pairs:
        return None
    i = rng.choice(pairs)
    return {"fes": f, "v": v, "x": f.spec[i][1], "y": f.spec[i + 1][1],
            "mode": cfg.graph_mode, "noshrink": True}


def _check_mig_ineq(case):
    f, v = case["fes"], case["v"]
    i = _adjacent(f, case["x"], case["y"])
    sx = f.spec[i][0]
    rep = apply_swap(f, i, case["mode"], allow_ineq=True)
    base, moved = sem(f, v), sem(rep.result, v)
    if rep.relation == EQUAL:
        ok = _vals_equal(f.es, base, moved)
    elif rep.relation == GEQ:
        ok = valuation_leq(f.es, base, moved)
    else:
        ok = valuation_leq(f.es, moved, base)
    if not ok:
        return (f"swap at {i} reported {rep.relation} but the solutions "
                f"are not so ordered")
    expected = GEQ if (sx, f.spec[i + 1][0]) == (MU, NU) else LEQ
    if rep.relation not in (EQUAL, expected):
        return f"swap at {i} reported {rep.relation}, expected {expected}"
    return None


def _gen_dup_collapse(rng, cfg, mutate):
    f, v = _gen_fes(rng, cfg)
    if not f.spec:
        return None
    j = rng.randrange(len(f.spec))
    x = f.spec[j][1]
    extra = (rng.choice((MU, NU)), x)
    i = rng.randint(0, j)
    spec = f.spec[:i] + (extra,) + f.spec[i:]
    return {"fes": Fes(f.es, spec), "v": v}


def _check_dup_collapse(case):
    f, v = case["fes"], case["v"]
    for j in range(len(f.spec)):
        if f.spec[j][1] in dom(f.spec[j + 1:]):
            reduced = Fes(f.es, f.spec[:j] + f.spec[j + 1:])
            if not _vals_equal(f.es, sem(f, v), sem(reduced, v)):
                return f"dropping the shadowed binding of {f.spec[j][1]} changed sem"
            return None
    return None


def _hyp_dup_collapse(case):
    s = case["fes"].spec
    return any(s[j][1] in dom(s[j + 1:]) for j in range(len(s)))


# ---------------------------------------------------------------------------
# catalogue, shrinking, and the driver

@dataclass
class _Property:
    id: str
    gen: object
    check: object
    hyp: object = None


def _law(pid, fn):
    return _Property(pid, lambda rng, cfg, mutate: {"law": fn, "rng": rng},
                     lambda case: case["law"](case["rng"]))


_PROPERTIES = [
    _law("L2.1.1", _law_computation),
    _law("L2.1.2", _law_constant),
    _law("L2.1.3", _law_rolling),
    _law("L2.1.4", _law_square),
    _law("L2.1.5", _law_fix_monotone),
    _law("L2.1.6", _law_diagonal),
    _law("L2.1.7", _law_unfolding),
    _law("L2.1.8", _law_solve),
    _law("L2.1.9", _law_bekic),
    _law("L2.2.1", _law_mu_leq_nu),
    _law("L2.2.2", _law_identity_bounds),
    _law("L2.2.3", _law_mu_nu_exchange),
    _law("L2.2.4", _law_bekic_ineq),
    _Property("SANITY1", _gen_sanity1, _check_sanity1, _hyp_sanity1),
    _Property("SANITY2", _gen_sanity2, _check_sanity2, _hyp_sanity2),
    _Property("SANITY3", _gen_sanity3, _check_sanity3, _hyp_sanity3),
    _Property("SOLUTION", _gen_solution, _check_solution, lambda c: _monotone(c)),
    _Property("CONGR-L", _gen_congr_l, _check_congr_l),
    _Property("CONGR-L-INEQ", _gen_congr_l_ineq, _check_congr_l_ineq,
              lambda c: _monotone(c)),
    _Property("CONGR-R", _gen_congr_r, _check_congr_r),
    _Property("INDEPSOLVE", _gen_indepsolve, _check_indepsolve),
    _Property("INDEPSOLVE2", _gen_indepsolve2, _check_indepsolve2),
    _Property("UNFOLD", _gen_unfold, _check_unfold, _hyp_unfold),
    _Property("UNFOLD-LOOP", _gen_unfold_loop, _check_unfold_loop, _hyp_unfold_loop),
    _Property("PARTIAL", _gen_partial, _check_partial, _hyp_partial),
    _Property("SWAP-SAME", _gen_swap_same, _check_swap_same, _hyp_swap_same),
    _Property("SWAP-LOOP", _gen_swap_loop, _check_swap_loop, _hyp_swap_loop),
    _Property("MIGRATION", _gen_migration, _check_migration),
    _Property("MIGRATION2", _gen_migration2, _check_migration2),
    _Property("SPLITSOLVE", _gen_splitsolve, _check_splitsolve, _hyp_splitsolve),
    _Property("SIGN-LOOP", _gen_sign_loop, _check_sign_loop, _hyp_sign_loop),
    _Property("SIGN-INEQ", _gen_sign_ineq, _check_sign_ineq),
    _Property("MIG-INEQ", _gen_mig_ineq, _check_mig_ineq),
    _Property("DUP-COLLAPSE", _gen_dup_collapse, _check_dup_collapse,
              _hyp_dup_collapse),
]

CATALOGUE = {p.id: p for p in _PROPERTIES}
ALL_PROPERTIES = tuple(p.id for p in _PROPERTIES)


def _smaller_exprs(lat, e):
    if isinstance(e, Const):
        return
    yield Const(lat.bottom)
    yield Const(lat.top)
    if isinstance(e, (Meet, Join)):
        yield from e.args


def _shrink_candidates(case):
    f = case["fes"]
    for j in range(len(f.spec)):
        c = dict(case)
        c["fes"] = Fes(f.es, f.spec[:j] + f.spec[j + 1:])
        yield c
    for x in f.es.vars:
        for e2 in _smaller_exprs(f.es.lattice, f.es.rhs[x]):
            if e2 == f.es.rhs[x]:
                continue
            c = dict(case)
            c["fes"] = Fes(f.es.with_rhs(x, e2), f.spec)
            yield c


def _shrink(prop, case):
    if "fes" not in case or case.get("noshrink"):
        return case
    steps = 0
    improved = True
    while improved and steps < SHRINK_CAP:
        improved = False
        for cand in _shrink_candidates(case):
            steps += 1
            try:
                if prop.hyp is not None and not prop.hyp(cand):
                    continue
                if prop.check(cand) is None:
                    continue
            except Exception:
                continue
            case = cand
            improved = True
            break
    return case


def _describe(pid, case, details):
    fes = case.get("fes")
    v = case.get("v")
    return Counterexample(fes, v, f"{pid}: {details}")


def run_suite(cfg: GenConfig, properties=None, mutate=None) -> list[PropertyResult]:
    """Run each property for cfg.cases cases; stop a property at its first
    (shrunk) counterexample.  `mutate` plugs in a deliberately broken
    generator, used to demonstrate the suite is able to fail."""
    if properties is None:
        properties = ALL_PROPERTIES
    results = []
    for pid in properties:
        if pid not in CATALOGUE:
            raise ValueError(f"unknown property {pid!r}")
        prop = CATALOGUE[pid]
        cex = None
        run = 0
        starved = 0
        for i in range(cfg.cases):
            rng = random.Random(f"{cfg.seed}:{pid}:{i}")
            case = None
            for _ in range(RETRY_CAP):
                case = prop.gen(rng, cfg, mutate)
                if case is not None:
                    break
            if case is None:
                starved += 1
                warnings.warn(
                    f"{pid}: hypotheses unreachable within {RETRY_CAP} tries",
                    HypothesisStarvation)
                break
            run += 1
            details = prop.check(case)
            if details is not None:
                case = _shrink(prop, case)
                details = prop.check(case) or details
                cex = _describe(pid, case, details)
                break
        results.append(PropertyResult(pid, run, cex, starved))
    return results
