"""SSTL to LTL_P translation and a direct LTL_P evaluator.

Bounded operators become unbounded ones whose window is expressed with guard
atoms over the position ``j`` and an entry position ``j0``.  Each bounded
occurrence gets its own obligation id ``k``; the temporal node that starts
the obligation carries ``obligation=k`` and captures ``j0`` whenever it is
evaluated (printed ``U@k``, ``F@k``, ``G@k``).  Every guard tagged ``@k``
lives underneath that node.

Two encodings are provided.  The window form::

    a U[a,b] b   ->  a U@k (b && within[a,b]@k)
    F[a,b] p     ->  F@k (p && within[a,b]@k)
    G[a,b] p     ->  G@k (within[a,b]@k -> p)

and the split form, which bounds the left operand instead::

    a U[a,b] b   ->  (a && j<=j0@k+(b-1)) U@k (b && j>=j0@k+a)
    F[a,b] p     ->  the split form of  true U[a,b] p
    G[a,b] p     ->  !(split form of  F[a,b] !p)
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable
from dataclasses import dataclass

from .errors import DialectError, UnboundObligation
from .formula import (
    INF,
    TRUE,
    Always,
    And,
    Atom,
    Eventually,
    Formula,
    GuardAtom,
    Implies,
    LinearPredicate,
    Next,
    Not,
    Or,
    TickInterval,
    TrueF,
    Until,
    require_ltlp,
    require_sstl,
)
from .monitor import predicate_column
from .trace import DiscreteTrace
from .verdict import F, T, U, Verdict, from_bool

ENCODINGS = ("conceptual", "impl")


def _is_bounded(iv: TickInterval | None) -> bool:
    return iv is not None and not iv.trivial


class _Translator:
    def __init__(self, split: bool):
        self.split = split
        self.ids = itertools.count(1)

    def go(self, phi: Formula) -> Formula:
        match phi:
            case TrueF() | Atom():
                return phi
            case Not(arg=a):
                return Not(self.go(a))
            case And(left=l, right=r):
                return And(self.go(l), self.go(r))
            case Or(left=l, right=r):
                return Or(self.go(l), self.go(r))
            case Implies(left=l, right=r):
                return Implies(self.go(l), self.go(r))
            case Until(left=l, right=r, interval=iv):
                if not _is_bounded(iv):
                    return Until(self.go(l), self.go(r))
                k = next(self.ids)
                return self.until(k, iv, self.go(l), self.go(r))
            case Eventually(arg=a, interval=iv):
                if not _is_bounded(iv):
                    return Eventually(self.go(a))
                k = next(self.ids)
                if self.split:
                    return self.until(k, iv, TRUE, self.go(a))
                return Eventually(And(self.go(a), _within(k, iv)), obligation=k)
            case Always(arg=a, interval=iv):
                if not _is_bounded(iv):
                    return Always(self.go(a))
                k = next(self.ids)
                if self.split:
                    return Not(self.until(k, iv, TRUE, Not(self.go(a))))
                return Always(Implies(_within(k, iv), self.go(a)), obligation=k)
        raise DialectError(f"cannot translate node {phi!r}")

    def until(self, k: int, iv: TickInterval, left: Formula, right: Formula) -> Formula:
        if not self.split:
            return Until(left, And(right, _within(k, iv)), obligation=k)
        lower = Atom(GuardAtom("lower", k, lo=iv.lo))
        if iv.hi != INF:
            left = And(left, Atom(GuardAtom("upper", k, hi=iv.hi - 1)))
        return Until(left, And(right, lower), obligation=k)


def _within(k: int, iv: TickInterval) -> Formula:
    return Atom(GuardAtom("within", k, iv.lo, iv.hi))


def translate(phi: Formula) -> Formula:
    """Window-guard encoding of an SSTL formula."""
    return _translate(phi, split=False)


def translate_impl(phi: Formula) -> Formula:
    """Split-guard encoding of an SSTL formula."""
    return _translate(phi, split=True)


def translate_with(phi: Formula, encoding: str) -> Formula:
    if encoding not in ENCODINGS:
        raise ValueError(f"unknown encoding {encoding!r}; expected one of {ENCODINGS}")
    return _translate(phi, split=encoding == "impl")


def _translate(phi: Formula, split: bool) -> Formula:
    require_sstl(phi)
    return _Translator(split).go(phi)


# -- obligations ---------------------------------------------------------------


@dataclass(frozen=True)
class ObligationRegistry:
    """Per-obligation windows ``[a, b]`` and the static bound on live copies.

    A window of width ``b - a + 1`` admits that many distinct entry positions
    whose window contains a given ``j``.  With ``b`` infinite, every copy older
    than ``a`` behaves identically, so they count once.
    """

    windows: tuple[tuple[int, int, int | float], ...]  # (k, a, b)

    @classmethod
    def of(cls, psi: Formula) -> ObligationRegistry:
        lo: dict[int, int] = {}
        hi: dict[int, int | float] = {}
        for g in _guards(psi):
            k = g.obligation
            if g.kind == "within":
                lo[k], hi[k] = g.lo, g.hi
            elif g.kind == "lower":
                lo[k] = g.lo
                hi.setdefault(k, INF)
            else:
                hi[k] = g.hi + 1
                lo.setdefault(k, 0)
        return cls(tuple((k, lo[k], hi[k]) for k in sorted(lo)))

    def width(self, k: int) -> int:
        for kk, a, b in self.windows:
            if kk == k:
                return 1 if b == INF else max(int(b) - a + 1, 0)
        raise KeyError(k)

    @property
    def bound(self) -> int:
        return sum(self.width(k) for k, _, _ in self.windows)

    def window(self, k: int) -> tuple[int, int | float]:
        for kk, a, b in self.windows:
            if kk == k:
                return a, b
        raise KeyError(k)


def _guards(psi: Formula) -> Iterable[GuardAtom]:
    for node in psi.walk():
        if isinstance(node, Atom) and isinstance(node.pred, GuardAtom):
            yield node.pred


# -- direct LTL_P semantics ------------------------------------------------------


class LtlpEvaluator:
    """Memoised LTL_P semantics over a finite trace or a lasso.

    Finite mode (``loop=None``): positions past the end have unknown signal
    values, exactly as in the SSTL monitor.  Lasso mode: the word is
    ``trace[:loop]`` followed by ``trace[loop:]`` repeated forever, and every
    verdict is two-valued.

    Guards are evaluated on the age ``j - env[k]``.  Past its saturation age a
    guard is constant, which is what bounds the positions that need visiting.
    """

    def __init__(self, psi: Formula, w: DiscreteTrace, loop: int | None = None):
        try:
            require_ltlp(psi)
        except ValueError as exc:
            raise DialectError(str(exc)) from None
        if loop is not None and not 0 <= loop < len(w):
            raise ValueError(f"loop start {loop} outside trace of length {len(w)}")
        self.psi = psi
        self.w = w
        self.L = len(w)
        self.loop = loop
        self.memo: dict = {}
        self.columns: dict[LinearPredicate, list[int]] = {}
        self.free: dict[Formula, frozenset[int]] = {}
        self.cap: dict[int, int] = {}
        for g in _guards(psi):
            self.cap[g.obligation] = max(self.cap.get(g.obligation, 0), g.saturation)
        self.captures: set[tuple[int, int]] = set()

    # positions ----------------------------------------------------------

    def _tick(self, p: int) -> int | None:
        if p < self.L:
            return p
        if self.loop is None:
            return None
        cyc = self.L - self.loop
        return self.loop + (p - self.loop) % cyc

    def _horizon(self, env: tuple) -> int:
        h = self.L
        for k, j0 in env:
            h = max(h, j0 + self.cap.get(k, 0))
        return h

    def _free(self, phi: Formula) -> frozenset[int]:
        got = self.free.get(phi)
        if got is None:
            ids = set()
            if isinstance(phi, Atom) and isinstance(phi.pred, GuardAtom):
                ids.add(phi.pred.obligation)
            for c in phi.children():
                ids |= self._free(c)
            if getattr(phi, "obligation", None) is not None:
                ids.discard(phi.obligation)
            got = self.free[phi] = frozenset(ids)
        return got

    # evaluation ------------------------------------------------------------

    def at(self, phi: Formula, p: int, env: dict[int, int] | tuple = ()) -> int:
        if isinstance(env, dict):
            env = tuple(sorted(env.items()))
        free = self._free(phi)
        env = tuple((k, v) for k, v in env if k in free)
        return self._at(phi, p, env)

    def _at(self, phi: Formula, p: int, env: tuple) -> int:
        if self.loop is None:
            p = min(p, self._horizon(env))
        key = (phi, p, env)
        v = self.memo.get(key)
        if v is None:
            v = self._eval(phi, p, env)
            self.memo[key] = v
        return v

    def _sub(self, phi: Formula, p: int, env: tuple) -> int:
        free = self._free(phi)
        return self._at(phi, p, tuple((k, v) for k, v in env if k in free))

    def _eval(self, phi: Formula, p: int, env: tuple) -> int:
        match phi:
            case TrueF():
                return T
            case Atom(pred=LinearPredicate() as pred):
                tick = self._tick(p)
                if tick is None:
                    return U
                col = self.columns.get(pred)
                if col is None:
                    col = self.columns[pred] = predicate_column(pred, self.w)
                return col[tick]
            case Atom(pred=GuardAtom() as g):
                for k, j0 in env:
                    if k == g.obligation:
                        return from_bool(g.holds_at_age(p - j0))
                raise UnboundObligation(f"guard {g} evaluated with obligation {g.obligation} unbound")
            case Not(arg=a):
                return T - self._sub(a, p, env)
            case And(left=l, right=r):
                x = self._sub(l, p, env)
                return F if x == F else min(x, self._sub(r, p, env))
            case Or(left=l, right=r):
                x = self._sub(l, p, env)
                return T if x == T else max(x, self._sub(r, p, env))
            case Implies(left=l, right=r):
                x = T - self._sub(l, p, env)
                return T if x == T else max(x, self._sub(r, p, env))
            case Next(arg=a):
                return self._sub(a, p + 1, env)
            case Until(left=l, right=r, obligation=k):
                env = self._bind(env, k, p)
                return self._until(l, r, p, env)
            case Eventually(arg=a, obligation=k):
                env = self._bind(env, k, p)
                return self._until(TRUE, a, p, env)
            case Always(arg=a, obligation=k):
                env = self._bind(env, k, p)
                return T - self._until(TRUE, Not(a), p, env)
        raise DialectError(f"cannot evaluate node {phi!r}")

    def _bind(self, env: tuple, k: int | None, p: int) -> tuple:
        if k is None:
            return env
        if p < self.L:
            self.captures.add((k, p))
        return tuple(sorted([(kk, v) for kk, v in env if kk != k] + [(k, p)]))

    def _until(self, l: Formula, r: Formula, p: int, env: tuple) -> int:
        last = max(p, self._horizon(env))
        if self.loop is not None:
            last += self.L - self.loop
        result, run = F, T
        for rp in range(p, last + 1):
            cand = min(run, self._sub(r, rp, env))
            if cand > result:
                result = cand
                if result == T:
                    break
            run = min(run, self._sub(l, rp, env))
            if run == F:
                break
        return result


def eval_ltlp(
    psi: Formula,
    w: DiscreteTrace,
    j: int,
    j0_env: dict[int, int] | None = None,
    *,
    loop: int | None = None,
) -> Verdict:
    """LTL_P verdict at position ``j``; ``j0_env`` binds free obligation ids."""
    if not 0 <= j < len(w) and loop is None:
        raise IndexError(f"position {j} outside trace of length {len(w)}")
    ev = LtlpEvaluator(psi, w, loop)
    return Verdict.of(ev.at(psi, j, j0_env or {}))


def eval_ltlp_all(psi: Formula, w: DiscreteTrace, *, loop: int | None = None) -> list[Verdict]:
    """Verdict at every position of ``w``, sharing one memo table."""
    ev = LtlpEvaluator(psi, w, loop)
    return [Verdict.of(ev.at(psi, j)) for j in range(len(w))]


def live_obligation_count(psi: Formula, w: DiscreteTrace, j: int, *, evaluator: LtlpEvaluator | None = None) -> int:
    """Distinct obligation copies whose window is open at position ``j``.

    The copies are the (id, entry position) pairs captured while evaluating
    ``psi`` at every position of ``w``.  Copies of an obligation with an
    unbounded window merge once they are past their lower bound.
    """
    if evaluator is None:
        evaluator = LtlpEvaluator(psi, w)
        for i in range(len(w)):
            evaluator.at(psi, i)
    reg = ObligationRegistry.of(psi)
    count = 0
    saturated: set[int] = set()
    for k, j0 in evaluator.captures:
        a, b = reg.window(k)
        if j0 + a <= j <= j0 + b:
            if b == INF:
                saturated.add(k)
            else:
                count += 1
    return count + len(saturated)
