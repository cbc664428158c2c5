"""Offline evaluation of SSTL formulas over finite discrete traces.

Finite traces are read with a three-valued (Kleene) semantics: every tick at
or after the end of the trace has unknown signal values, so a temporal
obligation whose window runs off the end is ``Inconclusive`` unless the
available prefix already forces the answer.  Because an unknown suffix looks
the same from every position inside it, all positions ``>= len(trace)``
share a single value; evaluation keeps it in slot ``L`` of each array.

Three evaluators live here:

* ``eval_all`` -- bottom-up dynamic programming, one array per subformula.
* ``eval_at``  -- the definition transcribed literally, memoised per
  (subformula, tick).  Kept independent of ``eval_all`` on purpose.
* ``stl_oracle`` -- dense-time STL over the piecewise-constant reading of the
  trace, reduced to finitely many points and open cells.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .discretize import exact
from .errors import DialectError
from .formula import (
    INF,
    Always,
    And,
    Atom,
    Eventually,
    Formula,
    Implies,
    LinearPredicate,
    Not,
    Or,
    TrueF,
    Until,
    compare,
    require_sstl,
    require_stl,
)
from .trace import DiscreteTrace
from .verdict import F, T, U, Verdict, from_bool


def predicate_column(pred: LinearPredicate, w: DiscreteTrace) -> list[int]:
    """Two-valued truth of ``pred`` at every tick of ``w`` (as F/T codes)."""
    try:
        idx = [(w.index(s), c) for s, c in pred.terms]
    except KeyError as exc:
        raise ValueError(f"formula refers to a signal the trace lacks: {exc}") from None
    rhs = pred.offset * w.factor
    return [from_bool(compare(sum(c * row[i] for i, c in idx), pred.relation, rhs)) for row in w.values]


def _bounds(iv) -> tuple[int, int | float]:
    if iv is None:
        return 0, INF
    return iv.lo, iv.hi


def _check(phi: Formula, w: DiscreteTrace, t: int | None = None) -> None:
    require_sstl(phi)
    if t is not None and not 0 <= t < len(w):
        raise IndexError(f"tick {t} outside trace of length {len(w)}")


# -- dynamic programming ----------------------------------------------------


def eval_all(phi: Formula, w: DiscreteTrace) -> list[Verdict]:
    """Verdict at every tick of ``w``."""
    _check(phi, w)
    table = _Table(w)
    col = table.values(phi)
    return [Verdict.of(v) for v in col[: len(w)]]


class _Table:
    def __init__(self, w: DiscreteTrace):
        self.w = w
        self.L = len(w)
        self.memo: dict[Formula, list[int]] = {}

    def values(self, phi: Formula) -> list[int]:
        got = self.memo.get(phi)
        if got is None:
            got = self._compute(phi)
            self.memo[phi] = got
        return got

    def _compute(self, phi: Formula) -> list[int]:
        L = self.L
        match phi:
            case TrueF():
                return [T] * (L + 1)
            case Atom(pred=LinearPredicate() as p):
                return predicate_column(p, self.w) + [U]
            case Not(arg=a):
                return [T - v for v in self.values(a)]
            case And(left=l, right=r):
                return list(map(min, self.values(l), self.values(r)))
            case Or(left=l, right=r):
                return list(map(max, self.values(l), self.values(r)))
            case Implies(left=l, right=r):
                return [max(T - x, y) for x, y in zip(self.values(l), self.values(r))]
            case Until(left=l, right=r, interval=iv):
                return self._until(self.values(l), self.values(r), *_bounds(iv))
            case Eventually(arg=a, interval=iv):
                return self._until([T] * (L + 1), self.values(a), *_bounds(iv))
            case Always(arg=a, interval=iv):
                neg = [T - v for v in self.values(a)]
                return [T - v for v in self._until([T] * (L + 1), neg, *_bounds(iv))]
        raise DialectError(f"cannot monitor node {phi!r}")

    def _until(self, v1: list[int], v2: list[int], a: int, b) -> list[int]:
        L = self.L
        if b == INF:
            return self._until_unbounded(v1, v2, a)
        out = [F] * (L + 1)
        for t in range(L + 1):
            best, run = F, T
            end = min(t + b, max(L, t + a))
            for tp in range(t, end + 1):
                k = min(tp, L)
                if tp >= t + a:
                    cand = min(run, v2[k])
                    if cand > best:
                        best = cand
                        if best == T:
                            break
                run = min(run, v1[k])
                if run == F:
                    break
            out[t] = best
        return out

    def _until_unbounded(self, v1, v2, a: int) -> list[int]:
        L = self.L
        # W[t] = v2[t] or (v1[t] and W[t+1]), with W[L] fixed by the unknown tail
        W = [F] * (L + 1)
        W[L] = v2[L]
        for t in range(L - 1, -1, -1):
            W[t] = max(v2[t], min(v1[t], W[t + 1]))
        if a == 0:
            return W
        # result[t] = min(v1[t .. t+a-1]) and W[t+a], positions clamped to L
        ext = v1 + [v1[L]] * a
        wext = W + [W[L]] * a
        zeros = [0]
        ones = [0]
        for v in ext:
            zeros.append(zeros[-1] + (v == F))
            ones.append(ones[-1] + (v == U))
        out = []
        for t in range(L + 1):
            if zeros[t + a] - zeros[t]:
                m = F
            elif ones[t + a] - ones[t]:
                m = U
            else:
                m = T
            out.append(min(m, wext[t + a]))
        return out


# -- literal recursion ---------------------------------------------------------


def eval_at(phi: Formula, w: DiscreteTrace, t: int) -> Verdict:
    """Verdict of ``phi`` at tick ``t``, following the definition case by case."""
    _check(phi, w, t)
    return Verdict.of(_Literal(w).at(phi, t))


class _Literal:
    def __init__(self, w: DiscreteTrace):
        self.w = w
        self.L = len(w)
        self.memo: dict[tuple[Formula, int], int] = {}
        self.columns: dict[LinearPredicate, list[int]] = {}

    def at(self, phi: Formula, t: int) -> int:
        t = min(t, self.L)
        key = (phi, t)
        v = self.memo.get(key)
        if v is None:
            v = self._at(phi, t)
            self.memo[key] = v
        return v

    def _at(self, phi: Formula, t: int) -> int:
        match phi:
            case TrueF():
                return T
            case Atom(pred=LinearPredicate() as p):
                if t >= self.L:
                    return U
                col = self.columns.get(p)
                if col is None:
                    col = self.columns[p] = predicate_column(p, self.w)
                return col[t]
            case Not(arg=a):
                return T - self.at(a, t)
            case And(left=l, right=r):
                return min(self.at(l, t), self.at(r, t))
            case Or(left=l, right=r):
                # derived: not(not l and not r)
                return T - min(T - self.at(l, t), T - self.at(r, t))
            case Implies(left=l, right=r):
                return T - min(self.at(l, t), T - self.at(r, t))
            case Until(left=l, right=r, interval=iv):
                return self._until(l, r, t, *_bounds(iv))
            case Eventually(arg=a, interval=iv):
                return self._until(TrueF(), a, t, *_bounds(iv))
            case Always(arg=a, interval=iv):
                return T - self._until(TrueF(), Not(a), t, *_bounds(iv))
        raise DialectError(f"cannot monitor node {phi!r}")

    def _until(self, l, r, t, a, b) -> int:
        # exists t' in [t+a, t+b] with r at t' and l at every t'' in [t, t')
        last = min(t + b, max(self.L, t + a))
        result = F
        for tp in range(t + a, last + 1):
            before = T
            for tpp in range(t, tp):
                before = min(before, self.at(l, tpp))
            result = max(result, min(self.at(r, tp), before))
        return result


# -- dense-time oracle ---------------------------------------------------------


def stl_oracle(phi: Formula, w: DiscreteTrace, t) -> Verdict:
    """Dense-time STL verdict at real time ``t`` (seconds).

    The trace is read as piecewise constant on ``[k*dt, (k+1)*dt)``.  With
    ``h = dt / q`` chosen so every interval bound is a multiple of ``h``, the
    truth of every subformula is constant on each grid point ``i*h`` and on
    each open cell ``(i*h, (i+1)*h)``.  Position ``2i`` stands for the point,
    ``2i+1`` for the cell, and the evaluation below is exact over them.
    """
    require_stl(phi)
    t = exact(t)
    if t < 0:
        raise ValueError("time must be non-negative")
    if t >= len(w) * w.dt:
        raise IndexError(f"time {t} s lies past the end of the trace")
    return Verdict.of(_Dense(phi, w).at_time(phi, t))


class _Dense:
    def __init__(self, phi: Formula, w: DiscreteTrace):
        self.w = w
        q = 1
        for node in phi.walk():
            iv = getattr(node, "interval", None)
            if iv is None:
                continue
            for bound in (iv.lo, iv.hi):
                if bound != INF:
                    q = math.lcm(q, (Fraction(bound) / w.dt).denominator)
        self.q = q
        self.h = w.dt / q
        self.end = 2 * len(w) * q  # first position past the trace
        self.memo: dict[tuple[Formula, int], int] = {}
        self.columns: dict[LinearPredicate, list[int]] = {}

    def position(self, t: Fraction) -> int:
        x = t / self.h
        if x.denominator == 1:
            return 2 * x.numerator
        return 2 * math.floor(x) + 1

    def steps(self, bound) -> int | float:
        if bound == INF:
            return INF
        n = Fraction(bound) / self.h
        assert n.denominator == 1
        return 2 * n.numerator

    def at_time(self, phi: Formula, t: Fraction) -> int:
        return self.at(phi, self.position(t))

    def at(self, phi: Formula, p: int) -> int:
        p = min(p, self.end)
        key = (phi, p)
        v = self.memo.get(key)
        if v is None:
            v = self._at(phi, p)
            self.memo[key] = v
        return v

    def _at(self, phi: Formula, p: int) -> int:
        match phi:
            case TrueF():
                return T
            case Atom(pred=LinearPredicate() as pred):
                if p >= self.end:
                    return U
                col = self.columns.get(pred)
                if col is None:
                    col = self.columns[pred] = predicate_column(pred, self.w)
                return col[(p // 2) // self.q]
            case Not(arg=a):
                return T - self.at(a, p)
            case And(left=l, right=r):
                return min(self.at(l, p), self.at(r, p))
            case Or(left=l, right=r):
                return max(self.at(l, p), self.at(r, p))
            case Implies(left=l, right=r):
                return max(T - self.at(l, p), self.at(r, p))
            case Until(left=l, right=r, interval=iv):
                return self._until(l, r, p, iv)
            case Eventually(arg=a, interval=iv):
                return self._until(TrueF(), a, p, iv)
            case Always(arg=a, interval=iv):
                return T - self._until(TrueF(), Not(a), p, iv)
        raise DialectError(f"cannot evaluate node {phi!r}")

    def _until(self, l, r, p: int, iv) -> int:
        lo, hi = (0, INF) if iv is None else (iv.lo, iv.hi)
        first = p + self.steps(lo)
        last = min(p + self.steps(hi), max(self.end, first))
        result = F
        run = T  # conjunction of l over positions p .. covered so far
        covered = p - 1
        for rpos in range(first, last + 1):
            if rpos == p:
                cand = self.at(r, rpos)
            else:
                # a witness at point r needs l on [t, r); inside cell r it
                # also needs l on the part of the cell before the witness
                need = rpos - 1 if rpos % 2 == 0 else rpos
                while covered < need:
                    covered += 1
                    run = min(run, self.at(l, covered))
                cand = min(run, self.at(r, rpos))
            if cand > result:
                result = cand
                if result == T:
                    break
            if run == F:
                break
        return result
