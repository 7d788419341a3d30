"""Solution-preserving and solution-bounding rewrites of a Fes.

Every transformation returns a ``TransformReport`` naming the rule that
justified it and the guaranteed relation between the solution of the result
and that of the input.  Callers asking for an equality never silently get a
weaker bound: if no EQUAL rule applies the call fails with
``PreconditionFailed`` unless ``allow_ineq`` (take the one-sided bound) or
``force`` (apply blindly, relation UNKNOWN) is set.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .depgraph import SYNTACTIC, build_graph, indep, reaches, reaches_nonempty, split_by_dep
from .eqs import Const, is_monotone_es, subst
from .errors import MonotonicityRequired, PreconditionFailed, UnknownVariable
from .semantics import sem
from .specs import MU, NU, Fes, alternation_count, disjoint, dom

# justification identifiers
UNFOLD_THM = "UNFOLD_THM"
UNFOLD_LOOP = "UNFOLD_LOOP"
PARTIAL = "PARTIAL"
SWAP_SAME = "SWAP_SAME"
SWAP_LOOP = "SWAP_LOOP"
MIGRATE = "MIGRATE"
MIGRATE_CTX = "MIGRATE_CTX"
SIGN_LOOP = "SIGN_LOOP"
SIGN_INEQ = "SIGN_INEQ"
MIG_INEQ = "MIG_INEQ"
SPLIT_SOLVE = "SPLIT_SOLVE"

# relations: how sem(result) compares to sem(input)
EQUAL = "EQUAL"
LEQ = "LEQ"
GEQ = "GEQ"
UNKNOWN = "UNKNOWN"


@dataclass
class TransformReport:
    result: Fes
    justification: object          # identifier, or a list of them for compound passes
    relation: str
    steps: list = field(default_factory=list)  # human-readable step log


def _require_monotone(es):
    ok, witness = is_monotone_es(es)
    if not ok:
        raise MonotonicityRequired(f"system is not monotone, witness {witness}")


def _path(g, x, y):
    """A shortest non-empty dependency path from x to y, or None."""
    if x not in g.nodes:
        return None
    prev = {}
    q = deque([x])
    visited = {x}
    while q:
        n = q.popleft()
        for s in g.successors(n):
            if s == y:
                path = [y, n]
                while path[-1] != x:
                    path.append(prev[path[-1]])
                return list(reversed(path))
            if s not in visited:
                visited.add(s)
                prev[s] = n
                q.append(s)
    return None


def unfold_es(es, x, y):
    """Substitute the defining equation of y into the right-hand side of x."""
    if x not in es.rhs:
        raise UnknownVariable(x)
    if y not in es.rhs:
        raise UnknownVariable(y)
    return es.with_rhs(x, subst(es.rhs[x], y, es.rhs[y]))


def apply_unfold(f: Fes, x, y, mode: str = SYNTACTIC, force: bool = False) -> TransformReport:
    """Unfold y into x, justified by position (x never bound again after
    some occurrence of y; x = y allowed) or by the absence of a dependency
    path from y back to x."""
    result = Fes(unfold_es(f.es, x, y), f.spec)
    if force:
        return TransformReport(result, UNFOLD_THM, UNKNOWN)
    _require_monotone(f.es)
    s = tuple(f.spec)
    for i, (_, v) in enumerate(s):
        if v == y and x not in dom(s[i + 1:]):
            return TransformReport(result, UNFOLD_THM, EQUAL)
    g = build_graph(f, mode)
    if y in g.nodes and not reaches(g, y, x):
        return TransformReport(result, UNFOLD_LOOP, EQUAL)
    witness = _path(g, y, x) if y in g.nodes else None
    if x == y:
        witness = [x]
    raise PreconditionFailed(
        condition=f"no occurrence of {y} with {x} unbound after it, and {y} reaches {x}",
        witness=witness)


def apply_partial(f: Fes, x, v) -> TransformReport:
    """Replace the equation for x by the constant it solves to from v."""
    _require_monotone(f.es)
    a = sem(f, v)[x]
    return TransformReport(Fes(f.es.with_rhs(x, Const(a)), f.spec), PARTIAL, EQUAL)


def _swapped(s, i):
    s = list(s)
    s[i], s[i + 1] = s[i + 1], s[i]
    return tuple(s)


def apply_swap(f: Fes, i: int, mode: str = SYNTACTIC,
               allow_ineq: bool = False, force: bool = False) -> TransformReport:
    """Swap spec entries i and i+1.

    Equal signs always commute; unequal signs commute when the left
    variable has no dependency path to the right one over the spec suffix
    starting at i; otherwise only the one-sided mu/nu migration bound is
    available (opt-in via allow_ineq).
    """
    s = tuple(f.spec)
    if not 0 <= i < len(s) - 1:
        raise PreconditionFailed(condition=f"position {i} has no successor entry")
    (sx, x), (sy, y) = s[i], s[i + 1]
    result = Fes(f.es, _swapped(s, i))
    if force:
        return TransformReport(result, SWAP_SAME if sx == sy else MIG_INEQ, UNKNOWN)
    if sx == sy:
        _require_monotone(f.es)
        return TransformReport(result, SWAP_SAME, EQUAL)
    # the loop condition is evaluated over the suffix from position i
    g = build_graph(Fes(f.es, s[i:]), mode)
    if not reaches(g, x, y):
        return TransformReport(result, SWAP_LOOP, EQUAL)
    if allow_ineq and x != y:
        _require_monotone(f.es)
        # moving nu in front of mu can only raise the solution, and dually
        relation = GEQ if (sx, sy) == (MU, NU) else LEQ
        return TransformReport(result, MIG_INEQ, relation)
    raise PreconditionFailed(
        condition=f"signs differ and {x} reaches {y} in the suffix at {i}",
        witness=_path(g, x, y))


def apply_migrate(f: Fes, range1, range2, mode: str = SYNTACTIC,
                  force: bool = False) -> TransformReport:
    """Exchange two adjacent blocks of the spec.

    range1/range2 are half-open index pairs delimiting the blocks; the
    second must start where the first ends.  Needs the first block disjoint
    from everything after it and independence in at least one direction.
    Monotonicity is not required.
    """
    s = tuple(f.spec)
    a, b = range1
    b2, c = range2
    if not (0 <= a <= b == b2 <= c <= len(s)):
        raise PreconditionFailed(condition=f"ranges {range1}/{range2} are not adjacent blocks")
    s0, s1, s2, s3 = s[:a], s[a:b], s[b:c], s[c:]
    result = Fes(f.es, s0 + s2 + s1 + s3)
    justification = MIGRATE if not s3 else MIGRATE_CTX
    if force:
        return TransformReport(result, justification, UNKNOWN)
    if not disjoint(s1, s2 + s3):
        raise PreconditionFailed(
            condition="migrated block shares variables with the rest",
            witness=dom(s1) & dom(s2 + s3))
    d1, d23 = dom(s1), dom(s2 + s3)
    if not (indep(f.es, d1, d23, mode) or indep(f.es, d23, d1, mode)):
        raise PreconditionFailed(
            condition=f"neither indep({sorted(d1)},{sorted(d23)}) nor the converse holds")
    return TransformReport(result, justification, EQUAL)


def apply_sign_flip(f: Fes, i: int, mode: str = SYNTACTIC) -> TransformReport:
    """Flip the sign at position i.

    An equality when the variable is not bound again later and has no
    dependency cycle through the suffix; otherwise only a one-sided bound
    (mu to nu raises, nu to mu lowers), which needs monotonicity.
    """
    s = tuple(f.spec)
    if not 0 <= i < len(s):
        raise PreconditionFailed(condition=f"position {i} out of range")
    sign, x = s[i]
    result = Fes(f.es, s[:i] + ((sign.flipped(), x),) + s[i + 1:])
    if x not in dom(s[i + 1:]):
        g = build_graph(Fes(f.es, s[i:]), mode)
        if not reaches_nonempty(g, x, x):
            return TransformReport(result, SIGN_LOOP, EQUAL)
    _require_monotone(f.es)
    return TransformReport(result, SIGN_INEQ, GEQ if sign == MU else LEQ)


def apply_split(f: Fes, x, mode: str = SYNTACTIC,
                dependent_first: bool = False) -> TransformReport:
    """Reorder the spec into (independent part, part reachable from x).

    Both orders solve to the same valuation; dependent_first picks the
    reachable block first.
    """
    s1, s2 = split_by_dep(x, f, mode)
    new = s2 + s1 if dependent_first else s1 + s2
    return TransformReport(Fes(f.es, new), SPLIT_SOLVE, EQUAL)


def reduce_alternations(f: Fes, mode: str = SYNTACTIC) -> TransformReport:
    """Greedy alternation reduction using only equality-preserving steps.

    Repeatedly applies an adjacent swap or a block migration that strictly
    lowers the number of sign changes in the spec.  Greedy, not optimal.
    """
    cur = f
    steps = []
    justs = []
    improved = True
    while improved:
        improved = False
        count = alternation_count(cur.spec)
        n = len(cur.spec)
        # adjacent swaps first: cheapest to check
        for i in range(n - 1):
            try:
                rep = apply_swap(cur, i, mode)
            except (PreconditionFailed, MonotonicityRequired):
                continue
            if alternation_count(rep.result.spec) < count:
                steps.append(f"swap positions {i},{i + 1} [{rep.justification}]")
                justs.append(rep.justification)
                cur = rep.result
                improved = True
                break
        if improved:
            continue
        for a in range(n):
            for b in range(a + 1, n + 1):
                for c in range(b + 1, n + 1):
                    try:
                        rep = apply_migrate(cur, (a, b), (b, c), mode)
                    except PreconditionFailed:
                        continue
                    if alternation_count(rep.result.spec) < count:
                        steps.append(
                            f"migrate block [{a}:{b}] past [{b}:{c}] [{rep.justification}]")
                        justs.append(rep.justification)
                        cur = rep.result
                        improved = True
                        break
                if improved:
                    break
            if improved:
                break
    return TransformReport(cur, justs, EQUAL, steps)
