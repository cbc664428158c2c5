"""Finite-state, tick-driven system models.

Model text::

    dt 0.001;                      # seconds per tick (default 1)
    factor 1000;                   # variables hold real values scaled by this (default 1)
    limit 500;                     # optional: freeze the model after this many ticks
    const PERIOD = 800;
    var x in [0..5] init 0;
    process p {
      trans inc: guard x < 5 -> updates { x := x + 1 };
      trans pick: guard x == 5 -> choose { updates { x := 0 } | updates { } };
    }
    trans t: guard true -> updates { };   # outside a block: the default process

Every tick is one synchronous round.  Each process fires one of its enabled
transitions (any of them, nondeterministically, and any alternative of a
``choose``); a process with nothing enabled idles.  Guards and right-hand
sides read the state from before the round.
"""

from __future__ import annotations

import itertools
import random
import re
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

from .discretize import exact
from .errors import ModelError
from .trace import DiscreteTrace

Update = tuple[tuple[int, Callable], ...]  # (variable index, value function)


@dataclass(frozen=True)
class Transition:
    name: str
    guard: Callable
    alternatives: tuple[Update, ...]  # one entry per choose branch


@dataclass(frozen=True)
class Process:
    name: str
    transitions: tuple[Transition, ...]


@dataclass(frozen=True)
class Variable:
    name: str
    lo: int
    hi: int


@dataclass(frozen=True)
class TransitionSystem:
    name: str
    variables: tuple[Variable, ...]
    init: tuple[int, ...]
    processes: tuple[Process, ...]
    dt: object = 1
    factor: int = 1
    limit: int | None = None
    _names: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "dt", exact(self.dt))
        object.__setattr__(self, "_names", tuple(v.name for v in self.variables))
        if len(set(self._names)) != len(self._names):
            raise ModelError("duplicate variable names")
        if len(self.init) != len(self.variables):
            raise ModelError("initial valuation does not match the variable list")
        for v, x in zip(self.variables, self.init):
            if not v.lo <= x <= v.hi:
                raise ModelError(f"initial value {x} of {v.name} outside [{v.lo}..{v.hi}]")
        if self.limit is not None and self.limit < 0:
            raise ModelError("tick limit must be non-negative")

    @property
    def var_names(self) -> tuple[str, ...]:
        return self._names

    def initial_states(self) -> list[tuple]:
        if self.limit is None:
            return [self.init]
        return [self.init + (0,)]

    def successors(self, state: tuple) -> list[tuple]:
        """Distinct successor states in a fixed order."""
        n = len(self.variables)
        if self.limit is not None:
            tick = state[n]
            if tick >= self.limit:
                return [state]
            core = state[:n]
        else:
            core = state
        options = []
        for proc in self.processes:
            mine = []
            for tr in proc.transitions:
                if tr.guard(core):
                    mine.extend((proc.name, tr.name, alt) for alt in tr.alternatives)
            options.append(mine or [None])
        out = {}
        for combo in itertools.product(*options):
            nxt = list(core)
            written: dict[int, tuple[str, int]] = {}
            for pick in combo:
                if pick is None:
                    continue
                pname, tname, alt = pick
                for i, fn in alt:
                    value = int(fn(core))
                    prev = written.get(i)
                    if prev is not None and prev[1] != value:
                        raise ModelError(
                            f"conflicting assignments to {self.variables[i].name} "
                            f"({prev[0]} and {pname}.{tname}) in state {self.describe(core)}"
                        )
                    written[i] = (f"{pname}.{tname}", value)
                    var = self.variables[i]
                    if not var.lo <= value <= var.hi:
                        raise ModelError(
                            f"{pname}.{tname} sets {var.name} to {value}, outside [{var.lo}..{var.hi}], "
                            f"in state {self.describe(core)}"
                        )
                    nxt[i] = value
            s2 = tuple(nxt)
            if self.limit is not None:
                s2 = s2 + (state[n] + 1,)
            out.setdefault(s2, None)
        return list(out)

    def describe(self, state: tuple) -> str:
        return "{" + ", ".join(f"{v.name}={x}" for v, x in zip(self.variables, state)) + "}"

    def valuation(self, state: tuple) -> dict[str, int]:
        return dict(zip(self._names, state))


def reachable_states(sys: TransitionSystem, max_states: int = 1_000_000) -> list[tuple]:
    """Breadth-first enumeration of every reachable state."""
    seen = dict.fromkeys(sys.initial_states())
    frontier = list(seen)
    while frontier:
        nxt = []
        for s in frontier:
            for t in sys.successors(s):
                if t not in seen:
                    seen[t] = None
                    nxt.append(t)
                    if len(seen) > max_states:
                        raise ModelError(f"more than {max_states} reachable states")
        frontier = nxt
    return list(seen)


def simulate(sys: TransitionSystem, ticks: int, seed: int = 0) -> DiscreteTrace:
    """One run of ``ticks`` states, resolving nondeterminism with a seeded RNG."""
    if ticks < 1:
        raise ValueError("simulate needs at least one tick")
    rng = random.Random(seed)
    state = sys.initial_states()[0]
    n = len(sys.variables)
    rows = [state[:n]]
    for _ in range(ticks - 1):
        succ = sys.successors(state)
        state = succ[0] if len(succ) == 1 else rng.choice(succ)
        rows.append(state[:n])
    return DiscreteTrace(sys.dt, sys.var_names, rows, sys.factor)


def lasso_system(prefix: Sequence[dict], cycle: Sequence[dict], factor: int = 1, dt=1) -> TransitionSystem:
    """A deterministic system whose only run is ``prefix`` then ``cycle`` forever."""
    rows = list(prefix) + list(cycle)
    if not cycle:
        raise ValueError("cycle must be non-empty")
    names = sorted({k for r in rows for k in r})
    values = [tuple(r[k] for k in names) for r in rows]
    return replay_system(names, values, len(prefix), factor, dt)


def from_trace(w: DiscreteTrace) -> TransitionSystem:
    """Replay ``w`` once, then stay in its final state forever."""
    return replay_system(w.signals, w.values, len(w) - 1, w.factor, w.dt)


def replay_system(names, values, loop: int, factor: int = 1, dt=1) -> TransitionSystem:
    n = len(values)
    lo = [min(v[i] for v in values) for i in range(len(names))]
    hi = [max(v[i] for v in values) for i in range(len(names))]
    variables = tuple(Variable(nm, lo[i], hi[i]) for i, nm in enumerate(names))
    variables += (Variable("__pos", 0, n - 1),)
    pos = len(names)
    transitions = []
    for k in range(n):
        nxt = k + 1 if k + 1 < n else loop
        row = values[nxt]
        upd = tuple((i, (lambda s, x=row[i]: x)) for i in range(len(names))) + ((pos, lambda s, x=nxt: x),)
        transitions.append(Transition(f"step{k}", (lambda s, k=k: s[pos] == k), (upd,)))
    return TransitionSystem(
        "replay", variables, tuple(values[0]) + (0,), (Process("replay", tuple(transitions)),), dt, factor
    )


# -- model text -----------------------------------------------------------------

_TOK = re.compile(
    r"\s+|#[^\n]*|(?P<num>\d+(?:\.\d+)?)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>:=|->|\.\.|&&|\|\||==|!=|<=|>=|[-+*/%<>!(){}\[\];:,|=])"
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int


def _lex(text: str) -> list[_Tok]:
    out, pos, line = [], 0, 1
    while pos < len(text):
        m = _TOK.match(text, pos)
        if m is None:
            raise ModelError(f"line {line}: unexpected character {text[pos]!r}")
        if m.lastgroup:
            out.append(_Tok(m.lastgroup, m.group(), line))
        line += m.group().count("\n")
        pos = m.end()
    out.append(_Tok("eof", "", line))
    return out


_BINARY = [
    ("||", "or"),
    ("&&", "and"),
    ("==", "=="),
    ("!=", "!="),
    ("<", "<"),
    ("<=", "<="),
    (">", ">"),
    (">=", ">="),
    ("+", "+"),
    ("-", "-"),
    ("*", "*"),
    ("/", "//"),
    ("%", "%"),
]
_LEVELS = [{"||"}, {"&&"}, {"==", "!=", "<", "<=", ">", ">="}, {"+", "-"}, {"*", "/", "%"}]
_PY = dict(_BINARY)


class _ModelParser:
    def __init__(self, text: str, name: str):
        self.toks = _lex(text)
        self.i = 0
        self.name = name
        self.consts: dict[str, int] = {}
        self.vars: dict[str, int] = {}
        self.variables: list[Variable] = []
        self.init: list[int] = []
        self.dt = exact(1)
        self.factor = 1
        self.limit = None
        self.processes: list[tuple[str, list[Transition]]] = []
        self.default: list[Transition] = []

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def err(self, msg: str) -> ModelError:
        return ModelError(f"line {self.tok.line}: {msg}")

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind != "eof":
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            raise self.err(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")

    def ident(self) -> str:
        t = self.tok
        if t.kind != "id":
            raise self.err(f"expected a name, found {t.text or 'end of input'!r}")
        self.i += 1
        return t.text

    def parse(self) -> TransitionSystem:
        while self.tok.kind != "eof":
            kw = self.tok.text
            if kw == "dt":
                self.i += 1
                self.dt = self.number()
                self.expect(";")
            elif kw == "factor":
                self.i += 1
                self.factor = self.int_const()
                self.expect(";")
            elif kw == "limit":
                self.i += 1
                self.limit = self.int_const()
                self.expect(";")
            elif kw == "const":
                self.i += 1
                name = self.ident()
                self.expect("=")
                self.consts[name] = self.int_const()
                self.expect(";")
            elif kw == "var":
                self.var_decl()
            elif kw == "process":
                self.i += 1
                pname = self.ident()
                self.expect("{")
                trs = []
                while not self.accept("}"):
                    trs.append(self.transition())
                self.processes.append((pname, trs))
            elif kw == "trans":
                self.default.append(self.transition())
            else:
                raise self.err(f"unexpected {kw!r}")
        procs = [Process(n, tuple(t)) for n, t in self.processes]
        if self.default:
            procs.append(Process("main", tuple(self.default)))
        if not self.variables:
            raise ModelError("model declares no variables")
        return TransitionSystem(
            self.name, tuple(self.variables), tuple(self.init), tuple(procs), self.dt, self.factor, self.limit
        )

    def number(self):
        neg = self.accept("-")
        t = self.tok
        if t.kind != "num":
            raise self.err(f"expected a number, found {t.text or 'end of input'!r}")
        self.i += 1
        v = exact(t.text)
        return -v if neg else v

    def int_const(self) -> int:
        """An integer literal or a previously declared constant, optionally negated."""
        neg = self.accept("-")
        t = self.tok
        if t.kind == "id":
            if t.text not in self.consts:
                raise self.err(f"unknown constant {t.text!r}")
            self.i += 1
            v = self.consts[t.text]
        else:
            q = self.number()
            if q.denominator != 1:
                raise self.err("expected an integer")
            v = int(q)
        return -v if neg else v

    def var_decl(self) -> None:
        self.expect("var")
        name = self.ident()
        if name in self.vars or name in self.consts:
            raise self.err(f"{name!r} declared twice")
        self.expect("in")
        self.expect("[")
        lo = self.int_const()
        self.expect("..")
        hi = self.int_const()
        self.expect("]")
        if hi < lo:
            raise self.err(f"empty domain [{lo}..{hi}] for {name}")
        self.expect("init")
        v = self.int_const()
        if not lo <= v <= hi:
            raise self.err(f"initial value {v} of {name} outside [{lo}..{hi}]")
        self.expect(";")
        self.vars[name] = len(self.variables)
        self.variables.append(Variable(name, lo, hi))
        self.init.append(v)

    def transition(self) -> Transition:
        self.expect("trans")
        name = self.ident()
        self.expect(":")
        self.expect("guard")
        guard_src = self.expr()
        self.expect("->")
        if self.accept("choose"):
            self.expect("{")
            alts = [self.updates()]
            while self.accept("|"):
                alts.append(self.updates())
            self.expect("}")
        else:
            alts = [self.updates()]
        self.expect(";")
        guard = _compile(guard_src)
        return Transition(name, guard, tuple(alts))

    def updates(self) -> Update:
        self.expect("updates")
        self.expect("{")
        out = []
        seen = set()
        if not self.accept("}"):
            while True:
                target = self.ident()
                if target not in self.vars:
                    raise self.err(f"assignment to undeclared variable {target!r}")
                if target in seen:
                    raise self.err(f"{target!r} assigned twice in one update")
                seen.add(target)
                self.expect(":=")
                out.append((self.vars[target], _compile(self.expr())))
                if self.accept("}"):
                    break
                self.expect(",")
        return tuple(out)

    # expressions compile to Python source over the state tuple ``s``

    def expr(self, level: int = 0) -> str:
        if level == len(_LEVELS):
            return self.unary()
        left = self.expr(level + 1)
        while self.tok.kind == "op" and self.tok.text in _LEVELS[level]:
            op = self.tok.text
            self.i += 1
            right = self.expr(level + 1)
            left = f"({left} {_PY[op]} {right})"
        return left

    def unary(self) -> str:
        if self.accept("!"):
            return f"(not {self.unary()})"
        if self.accept("-"):
            return f"(-{self.unary()})"
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        t = self.tok
        if t.kind == "num":
            q = self.number()
            if q.denominator != 1:
                raise self.err("model expressions are integer-valued")
            return str(int(q))
        if t.kind == "id":
            self.i += 1
            if t.text == "true":
                return "True"
            if t.text == "false":
                return "False"
            if t.text in ("min", "max"):
                self.expect("(")
                a = self.expr()
                self.expect(",")
                b = self.expr()
                self.expect(")")
                return f"{t.text}({a}, {b})"
            if t.text in self.consts:
                return str(self.consts[t.text])
            if t.text in self.vars:
                return f"s[{self.vars[t.text]}]"
            raise ModelError(f"line {t.line}: unknown name {t.text!r}")
        raise self.err(f"unexpected {t.text or 'end of input'!r} in expression")


def _compile(src: str) -> Callable:
    code = compile(f"lambda s: {src}", "<model>", "eval")
    return eval(code, {"__builtins__": {}, "min": min, "max": max})


def parse_model(text: str, name: str = "model") -> TransitionSystem:
    return _ModelParser(text, name).parse()
