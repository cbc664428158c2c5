"""Seeded random formulas and traces for the property suites."""

from __future__ import annotations

import random
from fractions import Fraction

from sstl.formula import (
    INF,
    TRUE,
    Always,
    And,
    Atom,
    Eventually,
    Implies,
    LinearPredicate,
    Not,
    Or,
    RealInterval,
    TickInterval,
    Until,
)
from sstl.trace import DiscreteTrace

RELATIONS = ("<", "<=", "=", ">=", ">")
SIGNALS = ("x", "y")


def random_predicate(rng: random.Random, signals=SIGNALS, factor: int = 1000) -> LinearPredicate:
    if rng.random() < 0.8:
        terms = ((rng.choice(signals), factor),)
    else:
        terms = tuple((s, rng.choice((-2, -1, 1, 2)) * factor) for s in signals)
    return LinearPredicate(terms, rng.choice(RELATIONS), rng.randint(-2, 2) * factor, factor)


def _leaf(rng: random.Random, signals):
    return TRUE if rng.random() < 0.1 else Atom(random_predicate(rng, signals))


def random_sstl(rng: random.Random, depth: int = 4, signals=SIGNALS, max_bound: int = 8):
    """SSTL formula of nesting depth at most ``depth``, bounds at most ``max_bound``."""
    if depth <= 1 or rng.random() < 0.2:
        return _leaf(rng, signals)

    def interval():
        r = rng.random()
        if r < 0.15:
            return None
        a = rng.randint(0, max_bound)
        if r < 0.25:
            return TickInterval(a, INF)
        return TickInterval(a, rng.randint(a, max_bound))

    sub = lambda: random_sstl(rng, depth - 1, signals, max_bound)  # noqa: E731
    match rng.randrange(8):
        case 0:
            return Not(sub())
        case 1:
            return And(sub(), sub())
        case 2:
            return Or(sub(), sub())
        case 3:
            return Implies(sub(), sub())
        case 4 | 5:
            return Until(sub(), sub(), interval())
        case 6:
            return Eventually(sub(), interval())
        case _:
            return Always(sub(), interval())


def random_trace(rng: random.Random, length: int | None = None, signals=SIGNALS, dt=1) -> DiscreteTrace:
    n = length if length is not None else rng.randint(1, 30)
    rows = [[rng.randint(-2, 2) for _ in signals] for _ in range(n)]
    return DiscreteTrace.from_reals(signals, rows, dt=dt)


# -- STL instances where the dense and discrete semantics coincide ---------------

DTS = (Fraction(1), Fraction(1, 2), Fraction(1, 10), Fraction(1, 1000), Fraction(3, 4))


def random_stl_instance(rng: random.Random, depth: int = 3, max_ticks: int = 6):
    """A random STL formula, tick length and evaluation time.

    The sample stays inside the fragment on which truth values are constant
    on every tick cell: temporal operators nested under another temporal
    operator have lower bound 0 and a tick-aligned (or infinite) upper bound.
    Outermost operators may use any aligned lower bound and an upper bound
    that is aligned or aligned plus a fraction of a tick; the evaluation time
    is then a tick boundary.  When every lower bound is 0 and every upper
    bound aligned, the evaluation time is an arbitrary rational inside its tick.

    Returns ``(phi, dt, t)``.
    """
    dt = rng.choice(DTS)
    phi, all_zero = _stl(rng, depth, dt, max_ticks, nested=False)
    tick = rng.randint(0, 8)
    t = tick * dt
    if all_zero and rng.random() < 0.5:
        t += dt * Fraction(rng.randint(0, 9), 10)
    return phi, dt, t


def _stl(rng, depth, dt, max_ticks, nested):
    if depth <= 1 or rng.random() < 0.25:
        return _leaf(rng, SIGNALS), True

    def interval():
        r = rng.random()
        if r < 0.1:
            return None
        if nested:
            lo = 0
        else:
            lo = rng.randint(0, max_ticks) * dt if rng.random() < 0.6 else 0
        if r < 0.2:
            return RealInterval(lo, INF)
        hi = lo + rng.randint(0, max_ticks) * dt
        if not nested and rng.random() < 0.3:
            hi += dt * Fraction(rng.randint(1, 9), 10)
        return RealInterval(lo, hi)

    def zero(iv):
        # lower bound 0 and an aligned upper bound keep truth values cell-constant
        return iv is None or (iv.lo == 0 and (iv.hi == INF or (iv.hi / dt).denominator == 1))

    k = rng.randrange(7)
    if k < 4:
        a, za = _stl(rng, depth - 1, dt, max_ticks, nested)
        if k == 0:
            return Not(a), za
        b, zb = _stl(rng, depth - 1, dt, max_ticks, nested)
        return (And, Or, Implies)[k - 1](a, b), za and zb
    iv = interval()
    a, za = _stl(rng, depth - 1, dt, max_ticks, True)
    if k == 4:
        b, zb = _stl(rng, depth - 1, dt, max_ticks, True)
        return Until(a, b, iv), za and zb and zero(iv)
    return (Eventually if k == 5 else Always)(a, iv), za and zero(iv)


# -- the eleven-tick worked example ------------------------------------------------

# phi1 = x1 >= 0 holds at ticks 0..8, phi2 = x2 >= 0 at ticks 7..10
WORKED_X1 = (1, 1, 1, 1, 1, 1, 1, 1, 1, -1, -1)
WORKED_X2 = (-1, -1, -1, -1, -1, -1, -1, 1, 1, 1, 1)


def worked_example_trace() -> DiscreteTrace:
    return DiscreteTrace.from_reals(("x1", "x2"), list(zip(WORKED_X1, WORKED_X2)))
