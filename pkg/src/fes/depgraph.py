"""Variable dependency graphs: independence, closures, SCCs, splits.

Independence is a semantic notion (the output on V1 ignores the input on
V2); the syntactic mode is the sound over-approximation "no V2 variable
occurs free in a V1 right-hand side" and is the default, since every
preservation argument only ever needs the *absence* of dependence.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .eqs import eval_expr, free_vars
from .errors import SizeGuardExceeded
from .specs import Fes, Spec, dom, dom_ordered

DEFAULT_MAX_VALUATIONS = 10 ** 6

SYNTACTIC = "syntactic"
SEMANTIC = "semantic"


def indep(es, v1, v2, mode: str = SYNTACTIC,
          max_valuations: int = DEFAULT_MAX_VALUATIONS) -> bool:
    """Is the solution of every V1 variable unaffected by V2 inputs?"""
    v1 = frozenset(v1)
    v2 = frozenset(v2)
    if not v1 or not v2:
        return True
    if mode == SYNTACTIC:
        return all(not (free_vars(es.rhs[x]) & v2) for x in v1)
    if mode != SEMANTIC:
        raise ValueError(f"unknown independence mode {mode!r}")
    lat = es.lattice
    n = len(es.vars)
    rewrites = [x for x in es.vars if x in v2]
    cost = len(lat.elements) ** (n + len(rewrites))
    if cost > max_valuations:
        raise SizeGuardExceeded(
            f"semantic independence needs {cost} evaluations, bound is {max_valuations}")
    targets = [x for x in es.vars if x in v1]
    for combo in itertools.product(lat.elements, repeat=n):
        eta1 = dict(zip(es.vars, combo))
        base = {x: eval_expr(es, es.rhs[x], eta1) for x in targets}
        for rw in itertools.product(lat.elements, repeat=len(rewrites)):
            eta2 = dict(eta1)
            eta2.update(zip(rewrites, rw))
            for x in targets:
                if eval_expr(es, es.rhs[x], eta2) != base[x]:
                    return False
    return True


@dataclass
class DepGraph:
    nodes: list                  # dom of the spec, in spec order
    edges: set                   # ordered pairs (X, Y): X depends on Y
    mode: str
    labels: dict = field(default_factory=dict)  # node -> Sign of first occurrence

    def successors(self, x):
        return [y for y in self.nodes if (x, y) in self.edges]


def build_graph(f: Fes, mode: str = SYNTACTIC,
                max_valuations: int = DEFAULT_MAX_VALUATIONS) -> DepGraph:
    nodes = dom_ordered(f.spec)
    labels = {}
    for sign, x in f.spec:
        labels.setdefault(x, sign)
    edges = set()
    for x in nodes:
        for y in nodes:
            if not indep(f.es, {x}, {y}, mode, max_valuations):
                edges.add((x, y))
    return DepGraph(nodes, edges, mode, labels)


def _closure(g: DepGraph) -> dict:
    """For each node, the set of nodes reachable by a non-empty path."""
    reach = {x: set(g.successors(x)) for x in g.nodes}
    changed = True
    while changed:
        changed = False
        for x in g.nodes:
            extra = set()
            for y in reach[x]:
                extra |= reach[y]
            if not extra <= reach[x]:
                reach[x] |= extra
                changed = True
    return reach


def reaches(g: DepGraph, x, y) -> bool:
    """Reflexive-transitive closure of the dependency edges."""
    if x == y:
        return True
    return y in _closure(g).get(x, set())


def reaches_nonempty(g: DepGraph, x, y) -> bool:
    """Transitive closure: a non-empty path from x to y."""
    return y in _closure(g).get(x, set())


def split_pred(s: Spec, p) -> tuple[Spec, Spec]:
    """Partition the spec by a predicate on variables, keeping relative order.

    Entries whose variable fails p land in the first part.
    """
    s1 = tuple(e for e in s if not p(e[1]))
    s2 = tuple(e for e in s if p(e[1]))
    return s1, s2


def split_by_dep(x, f: Fes, mode: str = SYNTACTIC) -> tuple[Spec, Spec]:
    """Split the spec into (entries x cannot reach, entries x can reach)."""
    g = build_graph(f, mode)
    if x not in g.nodes:
        return tuple(f.spec), ()
    closure = _closure(g)
    reachable = closure[x] | {x}
    return split_pred(f.spec, lambda y: y in reachable)


def sccs(g: DepGraph) -> list[frozenset]:
    """Strongly connected components, terminal (dependency-free) first.

    In the returned order, every cross-component edge points from a
    later-listed component to an earlier-listed one.
    """
    index = {}
    low = {}
    on_stack = set()
    stack = []
    out = []
    counter = itertools.count()

    def strongconnect(v):
        # iterative Tarjan to keep recursion depth independent of graph size
        work = [(v, iter(g.successors(v)))]
        index[v] = low[v] = next(counter)
        stack.append(v)
        on_stack.add(v)
        while work:
            node, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = next(counter)
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(g.successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[node] = min(low[node], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == node:
                        break
                out.append(frozenset(comp))

    for v in g.nodes:
        if v not in index:
            strongconnect(v)
    return out


def to_dot(g: DepGraph) -> str:
    """Deterministic DOT rendering; node labels are sign:name."""
    lines = ["digraph dependencies {"]
    for x in g.nodes:
        sign = g.labels.get(x)
        label = f"{sign}:{x}" if sign is not None else str(x)
        lines.append(f'  "{x}" [label="{label}"];')
    for x, y in sorted(g.edges, key=lambda e: (g.nodes.index(e[0]), g.nodes.index(e[1]))):
        lines.append(f'  "{x}" -> "{y}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
