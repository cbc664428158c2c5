"""LTL_P to Büchi automata.

The construction is an on-the-fly tableau over negation normal form.  An
automaton state is a set of *closures*: a formula node paired with the ages
``j - j0`` of the obligation ids it still refers to.  Guards are resolved
against those ages while a state is expanded, so transition labels only
mention signal predicates.  Once an age reaches the point where all guards of
that id are constant, the guards are substituted, the node is simplified, and
the id disappears from the closure.  That keeps the state space finite.

Each pending instance of a bounded obligation is its own closure, so
overlapping obligations of one operator (``G(p -> F[a,b] q)`` with ``p`` held
for several ticks) are tracked exactly rather than merged.

Acceptance is generalized, one set per Until occurrence of the input, and is
degeneralized with a level counter.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DialectError, UnboundObligation
from .formula import (
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
    TrueF,
    Until,
    require_ltlp,
)

# -- NNF nodes -----------------------------------------------------------------

TT, FF, LIT, GUARD, AND, OR, NEXT, UNTIL, RELEASE = "tt", "ff", "lit", "guard", "and", "or", "x", "u", "r"


class Node:
    """Interned NNF node; identity equality, deterministic ``serial`` ordering."""

    __slots__ = ("kind", "a", "b", "atom", "pos", "binder", "origin", "serial", "free", "_text")

    def __hash__(self):
        return self.serial

    def __repr__(self):
        return f"Node#{self.serial}({self.text()})"

    def text(self) -> str:
        if self._text is None:
            self._text = _node_text(self)
        return self._text


def _node_text(n: Node) -> str:
    from .printer import fmt_guard, fmt_predicate

    k = "" if n.binder is None else f"@{n.binder}"
    match n.kind:
        case "tt":
            return "true"
        case "ff":
            return "false"
        case "lit":
            s = fmt_predicate(n.atom)
            return f"({s})" if n.pos else f"!({s})"
        case "guard":
            s = fmt_guard(n.atom)
            return s if n.pos else f"!{s}"
        case "and":
            return f"({n.a.text()} && {n.b.text()})"
        case "or":
            return f"({n.a.text()} || {n.b.text()})"
        case "x":
            return f"X {n.a.text()}"
        case "u":
            return f"({n.a.text()} U{k} {n.b.text()})"
        case "r":
            return f"({n.a.text()} R{k} {n.b.text()})"
    raise AssertionError(n.kind)


class NodeTable:
    def __init__(self):
        self.table: dict[tuple, Node] = {}
        self.counter = itertools.count()
        self.tt = self._make(TT)
        self.ff = self._make(FF)

    def _make(self, kind, a=None, b=None, atom=None, pos=True, binder=None, origin=None) -> Node:
        key = (kind, a, b, atom, pos, binder, origin)
        got = self.table.get(key)
        if got is not None:
            return got
        n = Node()
        n.kind, n.a, n.b, n.atom, n.pos, n.binder = kind, a, b, atom, pos, binder
        n.serial = next(self.counter)
        n.origin = n.serial if (kind == UNTIL and origin is None) else origin
        n._text = None
        free = set()
        if kind == GUARD:
            free.add(atom.obligation)
        for c in (a, b):
            if c is not None:
                free |= c.free
        if binder is not None:
            free.discard(binder)
        n.free = frozenset(free)
        self.table[key] = n
        return n

    # smart constructors with constant folding

    def lit(self, pred: LinearPredicate, pos: bool) -> Node:
        return self._make(LIT, atom=pred, pos=pos)

    def guard(self, g: GuardAtom, pos: bool) -> Node:
        return self._make(GUARD, atom=g, pos=pos)

    def conj(self, a: Node, b: Node) -> Node:
        if a is self.ff or b is self.ff:
            return self.ff
        if a is self.tt:
            return b
        if b is self.tt or a is b:
            return a
        return self._make(AND, a, b)

    def disj(self, a: Node, b: Node) -> Node:
        if a is self.tt or b is self.tt:
            return self.tt
        if a is self.ff:
            return b
        if b is self.ff or a is b:
            return a
        return self._make(OR, a, b)

    def nxt(self, a: Node) -> Node:
        if a is self.tt or a is self.ff:
            return a
        return self._make(NEXT, a)

    def until(self, a: Node, b: Node, binder=None, origin=None) -> Node:
        if b is self.tt or b is self.ff:
            return b
        if binder is not None and binder not in a.free and binder not in b.free:
            binder = None
        if a is self.ff and binder is None:
            return b
        return self._make(UNTIL, a, b, binder=binder, origin=origin)

    def release(self, a: Node, b: Node, binder=None) -> Node:
        if b is self.tt or b is self.ff:
            return b
        if binder is not None and binder not in a.free and binder not in b.free:
            binder = None
        if a is self.tt and binder is None:
            return b
        return self._make(RELEASE, a, b, binder=binder)

    # conversion

    def nnf(self, phi: Formula, neg: bool = False) -> Node:
        match phi:
            case TrueF():
                return self.ff if neg else self.tt
            case Atom(pred=LinearPredicate() as p):
                return self.lit(p, not neg)
            case Atom(pred=GuardAtom() as g):
                return self.guard(g, not neg)
            case Not(arg=a):
                return self.nnf(a, not neg)
            case And(left=l, right=r):
                f = self.disj if neg else self.conj
                return f(self.nnf(l, neg), self.nnf(r, neg))
            case Or(left=l, right=r):
                f = self.conj if neg else self.disj
                return f(self.nnf(l, neg), self.nnf(r, neg))
            case Implies(left=l, right=r):
                if neg:
                    return self.conj(self.nnf(l), self.nnf(r, True))
                return self.disj(self.nnf(l, True), self.nnf(r))
            case Next(arg=a):
                return self.nxt(self.nnf(a, neg))
            case Until(left=l, right=r, obligation=k):
                if neg:
                    return self.release(self.nnf(l, True), self.nnf(r, True), k)
                return self.until(self.nnf(l), self.nnf(r), k)
            case Eventually(arg=a, obligation=k):
                if neg:
                    return self.release(self.ff, self.nnf(a, True), k)
                return self.until(self.tt, self.nnf(a), k)
            case Always(arg=a, obligation=k):
                if neg:
                    return self.until(self.tt, self.nnf(a, True), k)
                return self.release(self.ff, self.nnf(a), k)
        raise DialectError(f"cannot convert node {phi!r}")

    def substitute(self, n: Node, k: int, age: int) -> Node:
        """Replace guards of obligation ``k`` by their value at ``age``."""
        if k not in n.free and n.binder != k:
            return n
        match n.kind:
            case "guard":
                return self.tt if n.atom.holds_at_age(age) == n.pos else self.ff
            case "and":
                return self.conj(self.substitute(n.a, k, age), self.substitute(n.b, k, age))
            case "or":
                return self.disj(self.substitute(n.a, k, age), self.substitute(n.b, k, age))
            case "x":
                return self.nxt(self.substitute(n.a, k, age))
            case "u" | "r":
                a = self.substitute(n.a, k, age)
                b = self.substitute(n.b, k, age)
                binder = None if n.binder == k else n.binder
                if n.kind == UNTIL:
                    return self.until(a, b, binder, n.origin)
                return self.release(a, b, binder)
        return n


def walk(n: Node) -> Iterator[Node]:
    seen = set()
    stack = [n]
    while stack:
        x = stack.pop()
        if x.serial in seen:
            continue
        seen.add(x.serial)
        yield x
        for c in (x.b, x.a):
            if c is not None:
                stack.append(c)


# -- label consistency -----------------------------------------------------------


def label_satisfiable(lits) -> bool:
    """Cheap satisfiability check over the reals.

    Complementary literals are rejected outright.  Literals over a single
    signal are intersected as bounds; multi-signal predicates are assumed
    satisfiable.
    """
    seen = {}
    for pred, pos in lits:
        if seen.get(pred, pos) != pos:
            return False
        seen[pred] = pos
    bounds: dict[str, list] = {}
    for pred, pos in lits:
        if len(pred.terms) != 1:
            continue
        sig, c = pred.terms[0]
        if c == 0:
            continue
        rel = pred.relation if pos else _NEG[pred.relation]
        if c < 0:
            rel = _FLIP[rel]
        x = Fraction(pred.offset, c)
        b = bounds.setdefault(sig, [None, False, None, False, []])  # lo, lo_strict, hi, hi_strict, excluded
        if rel in (">", ">=", "="):
            strict = rel == ">"
            if b[0] is None or x > b[0] or (x == b[0] and strict):
                b[0], b[1] = x, strict
        if rel in ("<", "<=", "="):
            strict = rel == "<"
            if b[2] is None or x < b[2] or (x == b[2] and strict):
                b[2], b[3] = x, strict
        if rel == "!=":
            b[4].append(x)
    for lo, lo_s, hi, hi_s, excluded in bounds.values():
        if lo is not None and hi is not None:
            if lo > hi or (lo == hi and (lo_s or hi_s)):
                return False
            if lo == hi and lo in excluded:
                return False
    return True


_NEG = {"<": ">=", "<=": ">", ">": "<=", ">=": "<", "=": "!="}
_FLIP = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "=": "=", "!=": "!="}


# -- automaton -------------------------------------------------------------------

Closure = tuple  # (Node, env) with env a sorted tuple of (id, age)


@dataclass(frozen=True)
class Transition:
    label: tuple  # sorted tuple of (LinearPredicate, polarity)
    target: int


def _closure_key(c: Closure):
    return (c[0].serial, c[1])


@dataclass
class BuchiAutomaton:
    """Lazily expanded Büchi automaton.

    States are numbered in discovery order.  ``successors(q)`` expands state
    ``q`` on first use; ``explore()`` forces full construction.
    """

    formula: Formula
    nodes: NodeTable
    root: Node
    caps: dict[int, int]
    origins: tuple[int, ...]
    states: list = field(default_factory=list)
    index: dict = field(default_factory=dict)
    initial: list = field(default_factory=list)
    _succ: dict = field(default_factory=dict)

    @property
    def n_sets(self) -> int:
        return len(self.origins)

    def is_accepting(self, q: int) -> bool:
        return self.states[q][1] == self.n_sets

    def _intern(self, key) -> int:
        got = self.index.get(key)
        if got is None:
            got = self.index[key] = len(self.states)
            self.states.append(key)
        return got

    def describe(self, q: int) -> str:
        closures, level = self.states[q]
        parts = []
        for node, env in closures:
            ages = ",".join(f"{k}:{a}" for k, a in env)
            parts.append(node.text() + (f"[{ages}]" if ages else ""))
        return "{" + "; ".join(parts) + f"}}/{level}"

    def successors(self, q: int) -> list[Transition]:
        got = self._succ.get(q)
        if got is None:
            got = self._succ[q] = self._expand_state(q)
        return got

    def explore(self) -> BuchiAutomaton:
        i = 0
        while i < len(self.states):
            self.successors(i)
            i += 1
        return self

    def transitions(self):
        self.explore()
        for q in range(len(self.states)):
            for t in self.successors(q):
                yield q, t

    # closures ------------------------------------------------------------

    def make(self, node: Node, env) -> Closure:
        keep = [(k, a) for k, a in env if k in node.free or k == node.binder]
        out = []
        for k, age in keep:
            if age >= self.caps.get(k, 0):
                node = self.nodes.substitute(node, k, age)
            else:
                out.append((k, age))
        if out:
            out = [(k, a) for k, a in out if k in node.free or k == node.binder]
        return (node, tuple(out))

    def aged(self, env) -> tuple:
        return tuple((k, min(a + 1, self.caps.get(k, 0))) for k, a in env)

    def _expand_state(self, q: int) -> list[Transition]:
        closures, level = self.states[q]
        results = []
        self._expand(list(closures), {}, {}, set(), results)
        results = _prune_subsumed(results)
        n = self.n_sets
        out = []
        seen = set()
        for lits, nxt, postponed in results:
            start = 0 if level == n else level
            j = start
            while j < n and self.origins[j] not in postponed:
                j += 1
            succ_closures = tuple(sorted(nxt.values(), key=_closure_key))
            target = self._intern((succ_closures, j))
            label = tuple(sorted(lits.items(), key=lambda kv: _pred_key(kv[0])))
            t = Transition(label, target)
            if t not in seen:
                seen.add(t)
                out.append(t)
        return out

    def _expand(self, todo: list, lits: dict, nxt: dict, postponed: set, results: list) -> None:
        while todo:
            node, env = todo.pop()
            kind = node.kind
            if kind == TT:
                continue
            if kind == FF:
                return
            if kind == LIT:
                have = lits.get(node.atom)
                if have is None:
                    lits = dict(lits)
                    lits[node.atom] = node.pos
                    if not label_satisfiable(lits.items()):
                        return
                elif have != node.pos:
                    return
                continue
            if kind == GUARD:
                k = node.atom.obligation
                age = dict(env).get(k)
                if age is None:
                    raise UnboundObligation(f"guard {node.text()} used outside its binder")
                if node.atom.holds_at_age(age) != node.pos:
                    return
                continue
            if kind == AND:
                todo = todo + [self.make(node.b, env), self.make(node.a, env)]
                continue
            if kind == OR:
                self._expand(todo + [self.make(node.a, env)], lits, nxt, postponed, results)
                todo = todo + [self.make(node.b, env)]
                continue
            if kind == NEXT:
                c = self.make(node.a, self.aged(env))
                nxt = _add_next(nxt, c)
                continue
            # temporal: capture the entry position when the binder is not yet set
            if node.binder is not None and all(k != node.binder for k, _ in env):
                env = tuple(sorted(env + ((node.binder, 0),)))
            again = self.make(node, self.aged(env))
            if kind == UNTIL:
                self._expand(todo + [self.make(node.b, env)], lits, nxt, postponed, results)
                todo = todo + [self.make(node.a, env)]
                nxt = _add_next(nxt, again)
                if not env:
                    postponed = postponed | {node.origin}
                continue
            # release: b now, and either a now or the release again next
            bnow = self.make(node.b, env)
            self._expand(todo + [bnow, self.make(node.a, env)], lits, nxt, postponed, results)
            todo = todo + [bnow]
            nxt = _add_next(nxt, again)
        results.append((lits, nxt, postponed))


def _add_next(nxt: dict, c: Closure) -> dict:
    if c[0].kind == TT or _closure_key(c) in nxt:
        return nxt
    out = dict(nxt)
    out[_closure_key(c)] = c
    return out


def _pred_key(p: LinearPredicate):
    return (p.terms, p.relation, p.offset, p.factor)


def _prune_subsumed(results: list) -> list:
    """Drop alternatives that demand more and promise less than another."""
    out = []
    for i, (lits, nxt, post) in enumerate(results):
        if any(c[0].kind == FF for c in nxt.values()):
            continue
        dominated = False
        for j, (l2, n2, p2) in enumerate(results):
            if i == j:
                continue
            if (
                l2.items() <= lits.items()
                and n2.keys() <= nxt.keys()
                and p2 <= post
                and (len(l2) + len(n2) + len(p2) < len(lits) + len(nxt) + len(post) or j < i)
            ):
                dominated = True
                break
        if not dominated:
            out.append((lits, nxt, post))
    return out


def _caps(root: Node) -> dict[int, int]:
    caps: dict[int, int] = {}
    for n in walk(root):
        if n.kind == GUARD:
            k = n.atom.obligation
            caps[k] = max(caps.get(k, 0), n.atom.saturation)
    return caps


def negate(psi: Formula) -> Formula:
    """Syntactic negation; a double negation is collapsed."""
    if isinstance(psi, Not):
        return psi.arg
    return Not(psi)


def ltl_to_buchi(psi: Formula) -> BuchiAutomaton:
    """Büchi automaton over the infinite words satisfying ``psi``."""
    require_ltlp(psi)
    nodes = NodeTable()
    root = nodes.nnf(psi)
    origins = tuple(sorted({n.origin for n in walk(root) if n.kind == UNTIL}))
    aut = BuchiAutomaton(psi, nodes, root, _caps(root), origins)
    if root.free:
        raise UnboundObligation(f"obligation ids {sorted(root.free)} are never bound")
    start = aut.make(root, ())
    closures = () if start[0].kind == TT else (start,)
    if start[0].kind != FF:
        aut.initial.append(aut._intern((closures, aut.n_sets if not origins else 0)))
    return aut


def accepts_lasso(aut: BuchiAutomaton, prefix: list[dict], cycle: list[dict], factor: int = 1) -> bool:
    """Does ``aut`` accept ``prefix . cycle^omega``?  Valuations are scaled by ``factor``."""
    from .search import Product, find_accepting_cycle
    from .system import lasso_system

    sys = lasso_system(prefix, cycle, factor)
    return find_accepting_cycle(Product(sys, aut)) is not None
