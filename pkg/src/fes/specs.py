"""Specifications: ordered lists of signed variables, and the Fes pair."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping

from .eqs import EquationSystem
from .errors import UnknownVariable


class Sign(enum.Enum):
    MU = "mu"
    NU = "nu"

    def __str__(self):
        return self.value

    def flipped(self) -> "Sign":
        return Sign.NU if self is Sign.MU else Sign.MU


MU = Sign.MU
NU = Sign.NU

# A spec is a tuple of (Sign, var name) pairs; duplicates are permitted.
Spec = tuple


def spec(*entries) -> Spec:
    """Convenience constructor: spec((MU, "X"), (NU, "Y"))."""
    return tuple((Sign(s) if not isinstance(s, Sign) else s, x) for s, x in entries)


def dom(s: Spec) -> frozenset:
    return frozenset(x for _, x in s)


def dom_ordered(s: Spec) -> list:
    """Variables of the spec in first-occurrence order."""
    seen = []
    for _, x in s:
        if x not in seen:
            seen.append(x)
    return seen


def disjoint(s1: Spec, s2: Spec) -> bool:
    return not (dom(s1) & dom(s2))


def agrees_on(v1: Mapping, v2: Mapping, vs: Iterable) -> bool:
    return all(v1[x] == v2[x] for x in vs)


def alternation_count(s: Spec) -> int:
    """Number of sign changes scanning the spec left to right."""
    return sum(1 for (a, _), (b, _) in zip(s, s[1:]) if a != b)


@dataclass
class Fes:
    """A fixpoint equation system: equations plus a specification."""

    es: EquationSystem
    spec: Spec

    def __post_init__(self):
        self.spec = tuple(self.spec)
        for sign, x in self.spec:
            if not isinstance(sign, Sign):
                raise TypeError(f"spec entry sign must be a Sign, got {sign!r}")
            if x not in self.es.vars:
                raise UnknownVariable(f"spec mentions undeclared variable {x}")

    def with_spec(self, s: Spec) -> "Fes":
        return Fes(self.es, tuple(s))

    def with_es(self, es: EquationSystem) -> "Fes":
        return Fes(es, self.spec)

    def is_closed(self) -> bool:
        return dom(self.spec) == set(self.es.vars)
