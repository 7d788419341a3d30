"""Finite complete lattices and extremal fixpoints.

A lattice is an explicitly enumerated carrier together with a partial order.
Least/greatest fixpoints come in two flavours: ``mu_def``/``nu_def`` follow
the glb-of-prefixpoints definition and work for arbitrary functions, while
``mu_iter``/``nu_iter`` iterate from bottom/top and require monotonicity.
The definitional versions are the authoritative semantics; iteration is an
optimisation that must agree with them.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Mapping

from .errors import NonMonotoneDetected, SizeGuardExceeded

DEFAULT_MAX_CARRIER = 4096

# Unary functions are dicts element -> element (or callables); binary
# functions are dicts (element, element) -> element.


class FiniteLattice:
    """Carrier ``elements`` with order ``leq``; equality is structural.

    ``leq_pairs`` must contain every pair (a, b) with a <= b, including the
    reflexive ones.  Use ``verify_lattice`` to check that the data actually
    forms a complete lattice; the query methods assume it does.
    """

    def __init__(self, elements: Iterable, leq_pairs: Iterable[tuple], name: str = "lattice"):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("lattice elements must be pairwise distinct")
        self.name = name
        self._leq = frozenset(leq_pairs)
        self.index = {e: i for i, e in enumerate(self.elements)}
        self._meet = None  # lazy |U| x |U| tables, indexed by element index
        self._join = None
        self._bottom = None
        self._top = None

    # Structural identity: the carrier and the order, not the label.
    def __eq__(self, other):
        return (
            isinstance(other, FiniteLattice)
            and set(self.elements) == set(other.elements)
            and self._leq == other._leq
        )

    def __hash__(self):
        return hash((frozenset(self.elements), self._leq))

    def __repr__(self):
        return f"FiniteLattice({self.name!r}, {len(self.elements)} elements)"

    def __len__(self):
        return len(self.elements)

    def leq(self, a, b) -> bool:
        return (a, b) in self._leq

    def leq_pairs(self) -> frozenset:
        return self._leq

    def _tables(self):
        if self._meet is None:
            n = len(self.elements)
            meet = [[None] * n for _ in range(n)]
            join = [[None] * n for _ in range(n)]
            for i, a in enumerate(self.elements):
                for j, b in enumerate(self.elements):
                    meet[i][j] = self._glb_scan((a, b))
                    join[i][j] = self._lub_scan((a, b))
            self._meet = meet
            self._join = join
        return self._meet, self._join

    def _glb_scan(self, xs):
        lower = [y for y in self.elements if all(self.leq(y, x) for x in xs)]
        for y in lower:
            if all(self.leq(z, y) for z in lower):
                return y
        return None

    def _lub_scan(self, xs):
        upper = [y for y in self.elements if all(self.leq(x, y) for x in xs)]
        for y in upper:
            if all(self.leq(y, z) for z in upper):
                return y
        return None

    @property
    def bottom(self):
        if self._bottom is None:
            self._bottom = self._glb_scan(self.elements)
        return self._bottom

    @property
    def top(self):
        if self._top is None:
            self._top = self._lub_scan(self.elements)
        return self._top

    def meet(self, a, b):
        meet, _ = self._tables()
        return meet[self.index[a]][self.index[b]]

    def join(self, a, b):
        _, join = self._tables()
        return join[self.index[a]][self.index[b]]

    def glb(self, xs: Iterable):
        """Greatest lower bound of a subset; glb of nothing is top."""
        acc = self.top
        for x in xs:
            acc = self.meet(acc, x)
        return acc

    def lub(self, xs: Iterable):
        """Least upper bound of a subset; lub of nothing is bottom."""
        acc = self.bottom
        for x in xs:
            acc = self.join(acc, x)
        return acc

    # -- constructions ----------------------------------------------------

    @staticmethod
    def booleans() -> "FiniteLattice":
        els = (False, True)
        pairs = [(False, False), (True, True), (False, True)]
        return FiniteLattice(els, pairs, name="bool")

    @staticmethod
    def chain(n: int) -> "FiniteLattice":
        if n < 1:
            raise ValueError("chain needs at least one element")
        els = tuple(range(n))
        pairs = [(i, j) for i in els for j in els if i <= j]
        return FiniteLattice(els, pairs, name=f"chain{n}")

    @staticmethod
    def diamond() -> "FiniteLattice":
        els = ("bot", "a", "b", "top")
        below = {"bot": {"bot"}, "a": {"bot", "a"}, "b": {"bot", "b"}, "top": set(els)}
        pairs = [(x, y) for y in els for x in below[y]]
        return FiniteLattice(els, pairs, name="diamond")

    @staticmethod
    def powerset(k: int) -> "FiniteLattice":
        base = [f"d{i}" for i in range(1, k + 1)]
        els = []
        for size in range(k + 1):
            for combo in itertools.combinations(base, size):
                els.append(frozenset(combo))
        pairs = [(a, b) for a in els for b in els if a <= b]
        return FiniteLattice(els, pairs, name=f"powerset{k}")

    def dual(self) -> "FiniteLattice":
        pairs = [(b, a) for (a, b) in self._leq]
        return FiniteLattice(self.elements, pairs, name=f"dual({self.name})")

    @staticmethod
    def product(l1: "FiniteLattice", l2: "FiniteLattice",
                max_size: int = DEFAULT_MAX_CARRIER) -> "FiniteLattice":
        size = len(l1.elements) * len(l2.elements)
        if size > max_size:
            raise SizeGuardExceeded(
                f"product carrier has {size} elements, limit is {max_size}")
        els = [(a, b) for a in l1.elements for b in l2.elements]
        pairs = [
            ((a1, b1), (a2, b2))
            for (a1, a2) in l1._leq
            for (b1, b2) in l2._leq
        ]
        return FiniteLattice(els, pairs, name=f"{l1.name}*{l2.name}")

    @staticmethod
    def function_lattice(domain: Iterable, codomain: "FiniteLattice",
                         max_size: int = DEFAULT_MAX_CARRIER) -> "FiniteLattice":
        """All total maps domain -> codomain, ordered pointwise.

        Elements are tuples of codomain values, one per domain position in
        the given order; the domain is kept on the result as ``.domain``.
        """
        dom = tuple(domain)
        size = len(codomain.elements) ** len(dom)
        if size > max_size:
            raise SizeGuardExceeded(
                f"function lattice carrier has {size} elements, limit is {max_size}")
        els = list(itertools.product(codomain.elements, repeat=len(dom)))
        pairs = [
            (f, g)
            for f in els
            for g in els
            if all(codomain.leq(a, b) for a, b in zip(f, g))
        ]
        lat = FiniteLattice(els, pairs, name=f"({codomain.name}^{len(dom)})")
        lat.domain = dom
        return lat


def verify_lattice(lat: FiniteLattice) -> list[str]:
    """Check the partial-order axioms and glb existence for every subset.

    Returns one message per violation (with a witness); empty means the data
    is a complete lattice.  Past 12 elements full subset enumeration is
    skipped: for finite carriers, pairwise glbs plus glb of the whole and of
    the empty set already imply completeness.
    """
    out = []
    els = lat.elements
    for a in els:
        if not lat.leq(a, a):
            out.append(f"not reflexive: {a!r}")
    for a, b in lat._leq:
        if a not in lat.index or b not in lat.index:
            out.append(f"order mentions foreign element: ({a!r}, {b!r})")
            return out
        if lat.leq(b, a) and a != b:
            out.append(f"not anti-symmetric: {a!r}, {b!r}")
    for a, b in lat._leq:
        for c in els:
            if lat.leq(b, c) and not lat.leq(a, c):
                out.append(f"not transitive: {a!r} <= {b!r} <= {c!r}")
    if out:
        return out
    if len(els) <= 12:
        subsets = itertools.chain.from_iterable(
            itertools.combinations(els, r) for r in range(len(els) + 1))
    else:
        subsets = itertools.chain(
            [(), els], itertools.combinations(els, 2))
    for s in subsets:
        if lat._glb_scan(s) is None:
            out.append(f"no glb for {{{', '.join(map(repr, s))}}}")
    return out


def _as_callable(f) -> Callable:
    if isinstance(f, Mapping):
        return f.__getitem__
    return f


def is_monotone(lat: FiniteLattice, f) -> tuple[bool, tuple | None]:
    """True iff x <= y implies f(x) <= f(y); on failure also a witness pair."""
    fn = _as_callable(f)
    for a, b in lat._leq:
        if not lat.leq(fn(a), fn(b)):
            return False, (a, b)
    return True, None


def mu_def(lat: FiniteLattice, f):
    """glb of the pre-fixpoints of f; defined for arbitrary f."""
    fn = _as_callable(f)
    return lat.glb(x for x in lat.elements if lat.leq(fn(x), x))


def nu_def(lat: FiniteLattice, f):
    """lub of the post-fixpoints of f; defined for arbitrary f."""
    fn = _as_callable(f)
    return lat.lub(x for x in lat.elements if lat.leq(x, fn(x)))


def mu_iter(lat: FiniteLattice, f):
    """Least fixpoint by iterating f from bottom; f must be monotone."""
    return _iterate(lat, f, lat.bottom, ascending=True)


def nu_iter(lat: FiniteLattice, f):
    """Greatest fixpoint by iterating f from top; f must be monotone."""
    return _iterate(lat, f, lat.top, ascending=False)


def _iterate(lat, f, start, ascending):
    fn = _as_callable(f)
    x = start
    for _ in range(len(lat.elements) + 1):
        fx = fn(x)
        if fx == x:
            return x
        ok = lat.leq(x, fx) if ascending else lat.leq(fx, x)
        if not ok:
            raise NonMonotoneDetected(
                f"iteration left the chain at {x!r} -> {fx!r}", witness=(x, fx))
        x = fx
    raise NonMonotoneDetected(
        f"no stabilization within {len(lat.elements)} steps")


# -- random monotone functions (for the property checker) -----------------

def linear_extension(lat: FiniteLattice) -> list:
    """Elements in some order compatible with leq (smaller first)."""
    downset = {e: sum(1 for x in lat.elements if lat.leq(x, e)) for e in lat.elements}
    return sorted(lat.elements, key=lambda e: (downset[e], lat.index[e]))


def covers(lat: FiniteLattice, e) -> list:
    """Elements covered by e (maximal strictly-below elements)."""
    below = [x for x in lat.elements if lat.leq(x, e) and x != e]
    return [x for x in below
            if not any(x != y and lat.leq(x, y) for y in below)]


def random_monotone_fn(lat: FiniteLattice, rng) -> dict:
    """Random monotone unary table, built along a linear extension.

    Each f(x) is sampled uniformly from the up-set of lub{f(y) | y covered
    by x}, which keeps the table monotone by construction.
    """
    f = {}
    for e in linear_extension(lat):
        floor = lat.lub(f[c] for c in covers(lat, e))
        candidates = [z for z in lat.elements if lat.leq(floor, z)]
        f[e] = rng.choice(candidates)
    return f


def random_monotone_fn2(lat: FiniteLattice, rng) -> dict:
    """Random binary table into lat, monotone in both arguments jointly."""
    prod = FiniteLattice.product(lat, lat, max_size=len(lat) * len(lat))
    f = {}
    for e in linear_extension(prod):
        floor = lat.lub(f[c] for c in covers(prod, e))
        candidates = [z for z in lat.elements if lat.leq(floor, z)]
        f[e] = rng.choice(candidates)
    return f


def random_fn(lat: FiniteLattice, rng) -> dict:
    """Arbitrary (not necessarily monotone) unary table."""
    return {e: rng.choice(lat.elements) for e in lat.elements}
