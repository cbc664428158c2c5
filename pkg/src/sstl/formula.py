"""Shared formula AST for STL, SSTL and LTL_P.

One set of node classes serves all three dialects.  What distinguishes them
is the interval type carried by temporal nodes:

* STL      -- ``RealInterval`` (seconds, exact rationals)
* SSTL     -- ``TickInterval`` (integer ticks)
* LTL_P    -- no intervals; bounded windows show up as ``GuardAtom`` atoms and
              the temporal node that captures the window start carries an
              ``obligation`` id.
"""

from __future__ import annotations

import math
from collections.abc import Iterator
from dataclasses import dataclass, fields
from fractions import Fraction

from .errors import DialectError

INF = math.inf

RELATIONS = ("<", "<=", "=", ">=", ">")


def _cache_hash(cls):
    """Replace the dataclass hash with one computed once per instance."""

    def __hash__(self):
        try:
            return self.__dict__["_h"]
        except KeyError:
            h = hash((cls.__name__,) + tuple(getattr(self, f.name) for f in fields(self)))
            self.__dict__["_h"] = h
            return h

    cls.__hash__ = __hash__
    return cls


def _node(cls):
    return _cache_hash(dataclass(frozen=True)(cls))


# -- intervals ---------------------------------------------------------------


@_node
class RealInterval:
    lo: Fraction
    hi: Fraction | float  # INF when unbounded

    def __post_init__(self):
        if self.lo < 0:
            raise ValueError(f"interval lower bound must be non-negative, got {self.lo}")
        if self.hi < self.lo:
            raise ValueError(f"interval [{self.lo}, {self.hi}] has hi < lo")

    @property
    def bounded(self) -> bool:
        return self.hi != INF


@_node
class TickInterval:
    lo: int
    hi: int | float  # INF when unbounded

    def __post_init__(self):
        if self.lo < 0:
            raise ValueError(f"interval lower bound must be non-negative, got {self.lo}")
        if self.hi < self.lo:
            raise ValueError(f"interval [{self.lo}, {self.hi}] has hi < lo")

    @property
    def bounded(self) -> bool:
        return self.hi != INF

    @property
    def trivial(self) -> bool:
        """True for [0, inf), which is the same as no interval at all."""
        return self.lo == 0 and self.hi == INF


Interval = RealInterval | TickInterval


# -- atoms ---------------------------------------------------------------------


@_node
class LinearPredicate:
    """``sum(c_i * x_i) <rel> b`` with coefficients and offset scaled by ``factor``.

    The stored integers are ``round(c_i * factor)`` and ``round(b * factor)``.
    Against a valuation whose values are themselves scaled by ``vf``, the
    predicate is ``sum(C_i * X_i) <rel> B * vf``, exact in integers.
    """

    terms: tuple[tuple[str, int], ...]
    relation: str
    offset: int
    factor: int = 1000

    def __post_init__(self):
        if not self.terms:
            raise ValueError("a linear predicate needs at least one coefficient")
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        if self.factor <= 0:
            raise ValueError("quantization factor must be positive")

    @property
    def signals(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.terms)

    def holds(self, lhs: int, value_factor: int) -> bool:
        """Compare an already accumulated ``sum(C_i * X_i)`` against the offset."""
        return compare(lhs, self.relation, self.offset * value_factor)

    def evaluate(self, valuation: dict[str, int], value_factor: int) -> bool:
        lhs = sum(c * valuation[s] for s, c in self.terms)
        return self.holds(lhs, value_factor)


def compare(lhs: int, relation: str, rhs: int) -> bool:
    if relation == ">=":
        return lhs >= rhs
    if relation == ">":
        return lhs > rhs
    if relation == "<=":
        return lhs <= rhs
    if relation == "<":
        return lhs < rhs
    return lhs == rhs


@_node
class GuardAtom:
    """Window guard over the position ``j`` and a captured start ``j0``.

    kind ``within``: ``j0+lo <= j <= j0+hi``   (hi may be INF)
    kind ``lower``:  ``j >= j0+lo``
    kind ``upper``:  ``j <= j0+hi``
    """

    kind: str
    obligation: int
    lo: int = 0
    hi: int | float = INF

    def __post_init__(self):
        if self.kind not in ("within", "lower", "upper"):
            raise ValueError(f"unknown guard kind {self.kind!r}")
        if self.kind == "within" and self.hi < self.lo:
            raise ValueError(f"within[{self.lo},{self.hi}] has hi < lo")

    def holds_at_age(self, age: int) -> bool:
        """Truth of the guard when ``j - j0 == age``."""
        if self.kind == "within":
            return self.lo <= age <= self.hi
        if self.kind == "lower":
            return age >= self.lo
        return age <= self.hi

    @property
    def saturation(self) -> int:
        """Smallest age from which the guard's value never changes again."""
        if self.kind == "lower":
            return max(self.lo, 0)
        if self.kind == "upper":
            return max(int(self.hi) + 1, 0)
        return int(self.hi) + 1 if self.hi != INF else self.lo


# -- formula nodes -------------------------------------------------------------


class Formula:
    """Base class of all formula nodes."""

    def children(self) -> tuple[Formula, ...]:
        return ()

    def walk(self) -> Iterator[Formula]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children()))

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def __str__(self) -> str:
        from .printer import to_text

        return to_text(self)


@_node
class TrueF(Formula):
    pass


@_node
class Atom(Formula):
    pred: LinearPredicate | GuardAtom


@_node
class Not(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@_node
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@_node
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@_node
class Implies(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@_node
class Next(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@_node
class Until(Formula):
    left: Formula
    right: Formula
    interval: Interval | None = None
    obligation: int | None = None

    def children(self):
        return (self.left, self.right)


@_node
class Eventually(Formula):
    arg: Formula
    interval: Interval | None = None
    obligation: int | None = None

    def children(self):
        return (self.arg,)


@_node
class Always(Formula):
    arg: Formula
    interval: Interval | None = None
    obligation: int | None = None

    def children(self):
        return (self.arg,)


TRUE = TrueF()
TEMPORAL = (Until, Eventually, Always)


def predicates(phi: Formula) -> list[LinearPredicate]:
    """Distinct linear predicates of ``phi`` in first-occurrence order."""
    seen: dict[LinearPredicate, None] = {}
    for node in phi.walk():
        if isinstance(node, Atom) and isinstance(node.pred, LinearPredicate):
            seen.setdefault(node.pred, None)
    return list(seen)


def signals(phi: Formula) -> set[str]:
    return {s for p in predicates(phi) for s in p.signals}


def guards(phi: Formula) -> list[GuardAtom]:
    seen: dict[GuardAtom, None] = {}
    for node in phi.walk():
        if isinstance(node, Atom) and isinstance(node.pred, GuardAtom):
            seen.setdefault(node.pred, None)
    return list(seen)


def dialect_of(phi: Formula) -> str:
    """Best-effort classification: ``STL``, ``SSTL`` or ``LTLP``.

    A formula with no intervals, guards or Next is valid in every dialect and
    is reported as ``SSTL``.
    """
    real = tick = ltlp = False
    for node in phi.walk():
        if isinstance(node, Next):
            ltlp = True
        elif isinstance(node, Atom) and isinstance(node.pred, GuardAtom):
            ltlp = True
        elif isinstance(node, TEMPORAL):
            if node.obligation is not None:
                ltlp = True
            if isinstance(node.interval, RealInterval):
                real = True
            elif isinstance(node.interval, TickInterval):
                tick = True
    if sum((real, tick, ltlp)) > 1:
        raise ValueError("formula mixes dialects")
    if real:
        return "STL"
    if ltlp:
        return "LTLP"
    return "SSTL"


def require_sstl(phi: Formula) -> None:
    for node in phi.walk():
        if isinstance(node, Next):
            raise DialectError("Next is not an SSTL operator")
        if isinstance(node, Atom) and isinstance(node.pred, GuardAtom):
            raise DialectError("guard atoms only occur in LTL_P formulas")
        if isinstance(node, TEMPORAL):
            if isinstance(node.interval, RealInterval):
                raise DialectError("formula carries real-valued intervals; discretize it first")
            if node.obligation is not None:
                raise DialectError("obligation binders only occur in LTL_P formulas")


def require_stl(phi: Formula) -> None:
    for node in phi.walk():
        if isinstance(node, Next):
            raise DialectError("Next is not an STL operator")
        if isinstance(node, Atom) and isinstance(node.pred, GuardAtom):
            raise DialectError("guard atoms only occur in LTL_P formulas")
        if isinstance(node, TEMPORAL):
            if isinstance(node.interval, TickInterval):
                raise DialectError("formula carries tick intervals; it is already SSTL")
            if node.obligation is not None:
                raise DialectError("obligation binders only occur in LTL_P formulas")


def require_ltlp(phi: Formula) -> None:
    for node in phi.walk():
        if isinstance(node, TEMPORAL) and node.interval is not None:
            raise DialectError("LTL_P formulas carry no intervals; translate first")
