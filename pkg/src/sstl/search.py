"""Product exploration and accepting-cycle detection."""

from __future__ import annotations

import json
from collections.abc import Callable, Hashable, Iterable
from dataclasses import dataclass

from .automata import BuchiAutomaton, ltl_to_buchi, negate
from .errors import ConfigurationError, DialectError, ResourceLimit
from .formula import Formula, LinearPredicate, compare, dialect_of, predicates
from .trace import DiscreteTrace
from .translate import translate_with

DEFAULT_MAX_STATES = 5_000_000
DEFAULT_MAX_DEPTH = 200_000


class Product:
    """Synchronous product of a transition system and a Büchi automaton.

    In product state ``(s, q)`` the automaton reads the valuation of ``s`` and
    both components step together.  Successors come out in a fixed order:
    automaton transitions in construction order, then system successors in
    the order the system yields them.
    """

    def __init__(self, sys, aut: BuchiAutomaton):
        self.sys = sys
        self.aut = aut
        index = {name: i for i, name in enumerate(sys.var_names)}
        missing = sorted({s for p in predicates(aut.formula) for s in p.signals} - set(index))
        if missing:
            raise ConfigurationError(f"formula refers to signals the model does not declare: {', '.join(missing)}")
        self._index = index
        self._compiled: dict[LinearPredicate, Callable] = {}
        self._sys_succ: dict = {}

    def _pred(self, p: LinearPredicate) -> Callable:
        fn = self._compiled.get(p)
        if fn is None:
            terms = [(self._index[s], c) for s, c in p.terms]
            rhs = p.offset * self.sys.factor
            rel = p.relation

            def fn(state, terms=terms, rhs=rhs, rel=rel):
                return compare(sum(c * state[i] for i, c in terms), rel, rhs)

            self._compiled[p] = fn
        return fn

    def label_holds(self, label, state) -> bool:
        return all(self._pred(p)(state) == pos for p, pos in label)

    def initial(self) -> list:
        return [(s, q) for s in self.sys.initial_states() for q in self.aut.initial]

    def system_successors(self, s):
        got = self._sys_succ.get(s)
        if got is None:
            got = self._sys_succ[s] = self.sys.successors(s)
        return got

    def successors(self, ps) -> Iterable:
        s, q = ps
        nexts = None
        for t in self.aut.successors(q):
            if self.label_holds(t.label, s):
                if nexts is None:
                    nexts = self.system_successors(s)
                for s2 in nexts:
                    yield (s2, t.target)

    def accepting(self, ps) -> bool:
        return self.aut.is_accepting(ps[1])


@dataclass(frozen=True)
class Step:
    state: tuple  # system valuation, declared variables only
    automaton_state: int


@dataclass(frozen=True)
class Counterexample:
    variables: tuple[str, ...]
    prefix: tuple[Step, ...]
    cycle: tuple[Step, ...]
    dt: object = 1
    factor: int = 1

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("a lasso needs a non-empty cycle")

    @property
    def loop_start(self) -> int:
        return len(self.prefix)

    def to_trace(self) -> tuple[DiscreteTrace, int]:
        """The lasso as a finite trace plus the index the word loops back to."""
        rows = [st.state for st in self.prefix + self.cycle]
        return DiscreteTrace(self.dt, self.variables, rows, self.factor), self.loop_start

    def to_text(self) -> str:
        lines = []
        steps = list(self.prefix) + list(self.cycle)
        for tick, st in enumerate(steps):
            if tick == self.loop_start:
                lines.append("-- cycle starts here --")
            vals = " ".join(f"{n}={v}" for n, v in zip(self.variables, st.state))
            lines.append(f"tick {tick}: {vals}  [aut {st.automaton_state}]")
        lines.append(f"-- back to tick {self.loop_start} --")
        return "\n".join(lines)

    def to_json(self) -> dict:
        def enc(seq, start):
            return [
                {"tick": start + i, "state": dict(zip(self.variables, st.state)), "automaton": st.automaton_state}
                for i, st in enumerate(seq)
            ]

        return {
            "variables": list(self.variables),
            "prefix": enc(self.prefix, 0),
            "cycle": enc(self.cycle, len(self.prefix)),
            "loop_start": self.loop_start,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


_CYAN, _BLUE, _RED = 1, 2, 3


@dataclass
class SearchStats:
    states: int = 0
    max_depth: int = 0


def find_accepting_cycle(
    product,
    *,
    max_states: int = DEFAULT_MAX_STATES,
    max_depth: int = DEFAULT_MAX_DEPTH,
    stats: SearchStats | None = None,
) -> list | None:
    """Nested depth-first search with cyan/blue/red colouring.

    Returns ``None`` when no accepting cycle is reachable, otherwise a lasso
    as a pair ``(prefix, cycle)`` of product-state lists.  Each state is
    coloured once by the outer search and at most once more by the inner one,
    so no state is expanded more than twice.
    """
    stats = stats if stats is not None else SearchStats()
    color: dict[Hashable, int] = {}
    acc = product.accepting
    succ = product.successors

    for init in product.initial():
        if init in color:
            continue
        color[init] = _CYAN
        path = [init]
        where = {init: 0}
        stack = [iter(succ(init))]
        while stack:
            s = path[-1]
            pushed = False
            for t in stack[-1]:
                c = color.get(t)
                if c == _CYAN and (acc(s) or acc(t)):
                    stats.states = len(color)
                    i = where[t]
                    return path[:i], path[i:]
                if c is None:
                    color[t] = _CYAN
                    where[t] = len(path)
                    path.append(t)
                    stack.append(iter(succ(t)))
                    if len(color) > max_states:
                        stats.states = len(color)
                        raise ResourceLimit(f"state budget of {max_states} exceeded", len(color))
                    if len(path) > max_depth:
                        stats.states = len(color)
                        raise ResourceLimit(f"depth budget of {max_depth} exceeded", len(color))
                    stats.max_depth = max(stats.max_depth, len(path))
                    pushed = True
                    break
            if pushed:
                continue
            stack.pop()
            if acc(s):
                red = _red_search(s, succ, color)
                if red is not None:
                    stats.states = len(color)
                    i = where[red[-1]]
                    return path[:i], path[i:] + red[1:-1]
                color[s] = _RED
            else:
                color[s] = _BLUE
            path.pop()
            del where[s]
    stats.states = len(color)
    return None


def _red_search(seed, succ, color) -> list | None:
    """Search from ``seed`` for a cyan state; returns the path ending in it."""
    path = [seed]
    stack = [iter(succ(seed))]
    while stack:
        pushed = False
        for t in stack[-1]:
            c = color.get(t)
            if c == _CYAN:
                return path + [t]
            if c == _BLUE:
                color[t] = _RED
                path.append(t)
                stack.append(iter(succ(t)))
                pushed = True
                break
        if not pushed:
            stack.pop()
            path.pop()
    return None


@dataclass(frozen=True)
class VerificationResult:
    status: str  # Satisfied | Violated | ResourceLimit
    ltlp: Formula
    states_explored: int
    automaton_states: int
    counterexample: Counterexample | None = None

    @property
    def satisfied(self) -> bool:
        return self.status == "Satisfied"


def verify(
    sys,
    phi: Formula,
    encoding: str = "impl",
    *,
    max_states: int = DEFAULT_MAX_STATES,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> VerificationResult:
    """Check every run of ``sys`` against the SSTL formula ``phi``.

    Pipeline: translate, negate, build the automaton, explore the product,
    look for an accepting cycle.
    """
    if dialect_of(phi) == "STL" and any(getattr(n, "interval", None) is not None for n in phi.walk()):
        raise DialectError("verify expects an SSTL formula; discretize it with the model's tick length first")
    psi = translate_with(phi, encoding)
    aut = ltl_to_buchi(negate(psi))
    product = Product(sys, aut)
    stats = SearchStats()
    try:
        lasso = find_accepting_cycle(product, max_states=max_states, max_depth=max_depth, stats=stats)
    except ResourceLimit as exc:
        return VerificationResult("ResourceLimit", psi, exc.states_explored, len(aut.states))
    if lasso is None:
        return VerificationResult("Satisfied", psi, stats.states, len(aut.states))
    prefix, cycle = lasso
    n = len(sys.var_names)
    cex = Counterexample(
        tuple(sys.var_names),
        tuple(Step(tuple(s[:n]), q) for s, q in prefix),
        tuple(Step(tuple(s[:n]), q) for s, q in cycle),
        sys.dt,
        sys.factor,
    )
    return VerificationResult("Violated", psi, stats.states, len(aut.states), cex)
