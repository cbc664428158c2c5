"""Recursive-descent parser for the formula grammar.

Precedence, tightest first: ``!``/``X``/``G``/``F`` prefixes, ``U`` (right
associative), ``&&``, ``||``, ``->`` (right associative).
"""

from __future__ import annotations

import re
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

from .discretize import quantize
from .errors import FormulaSyntaxError
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
    RealInterval,
    TickInterval,
    Until,
)

DIALECTS = ("STL", "SSTL", "LTLP")

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>->|&&|\|\||<=|>=|==|[-+*/!()\[\],@<>=])
    """,
    re.VERBOSE,
)

_KEYWORDS = {"G", "F", "X", "U", "true", "false", "within", "inf"}
_RELATIONS = {"<", "<=", "=", "==", ">=", ">"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            for i, ch in enumerate(m.group(), start=pos):
                if ch == "\n":
                    line += 1
                    line_start = i + 1
        else:
            out.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str, dialect: str, factor: int, signals):
        self.toks = tokenize(text)
        self.i = 0
        self.dialect = dialect
        self.factor = factor
        self.signals = None if signals is None else set(signals)

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        return FormulaSyntaxError(message, tok.line, tok.col)

    def accept(self, text: str) -> Token | None:
        if self.tok.text == text and self.tok.kind != "eof":
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, text: str) -> Token:
        t = self.accept(text)
        if t is None:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return t

    # -- grammar

    def parse(self) -> Formula:
        phi = self.implies()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return phi

    def implies(self) -> Formula:
        left = self.disj()
        if self.accept("->"):
            return Implies(left, self.implies())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.accept("||"):
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.until()
        while self.accept("&&"):
            left = And(left, self.until())
        return left

    def until(self) -> Formula:
        left = self.unary()
        if self.tok.text == "U":
            self.i += 1
            obligation, interval = self.decorations()
            right = self.until()
            return Until(left, right, interval, obligation)
        return left

    def unary(self) -> Formula:
        t = self.tok
        if self.accept("!"):
            return Not(self.unary())
        if t.kind == "ident" and t.text in ("G", "F", "X"):
            self.i += 1
            if t.text == "X":
                if self.dialect != "LTLP":
                    raise self.error("X is only available in the LTLP dialect", t)
                return Next(self.unary())
            obligation, interval = self.decorations()
            arg = self.unary()
            cls = Always if t.text == "G" else Eventually
            return cls(arg, interval, obligation)
        return self.primary()

    def decorations(self):
        obligation = interval = None
        if self.tok.text == "@":
            at = self.expect("@")
            if self.dialect != "LTLP":
                raise self.error("obligation binders are only available in the LTLP dialect", at)
            obligation = self.integer()
        if self.tok.text == "[":
            if self.dialect == "LTLP":
                raise self.error("LTLP operators carry no intervals")
            interval = self.interval()
        return obligation, interval

    def interval(self):
        open_tok = self.expect("[")
        lo = self.bound(allow_inf=False)
        self.expect(",")
        hi = self.bound(allow_inf=True)
        self.expect("]")
        try:
            if self.dialect == "STL":
                return RealInterval(lo, hi)
            for b in (lo, hi):
                if b != INF and Fraction(b).denominator != 1:
                    raise self.error("SSTL interval bounds must be integers (ticks)", open_tok)
            return TickInterval(int(lo), hi if hi == INF else int(hi))
        except FormulaSyntaxError:
            raise
        except ValueError as exc:
            raise self.error(str(exc), open_tok) from None

    def bound(self, allow_inf: bool):
        if self.tok.text == "inf":
            if not allow_inf:
                raise self.error("lower bound cannot be infinite")
            self.i += 1
            return INF
        num = self.number()
        if self.accept("/"):
            den = self.number()
            if den == 0:
                raise self.error("zero denominator")
            num = num / den
        return num

    def number(self) -> Fraction:
        t = self.tok
        if t.kind != "num":
            raise self.error(f"expected a number, found {t.text or 'end of input'!r}")
        self.i += 1
        return Fraction(t.text)

    def integer(self) -> int:
        t = self.tok
        value = self.number()
        if value.denominator != 1:
            raise self.error("expected an integer", t)
        return int(value)

    def signed_integer(self) -> int:
        if self.accept("-"):
            return -self.integer()
        self.expect("+")
        return self.integer()

    def primary(self) -> Formula:
        t = self.tok
        if self.accept("("):
            phi = self.implies()
            self.expect(")")
            return phi
        if t.text == "true":
            self.i += 1
            return TRUE
        if t.text == "false":
            self.i += 1
            return Not(TRUE)
        if t.text == "within":
            return self.within()
        if t.text == "j" and self.peek().text in ("<=", ">=") and self.peek(2).text == "j0":
            return self.split_guard()
        if t.kind in ("num", "ident") or t.text == "-":
            return self.predicate()
        raise self.error(f"unexpected {t.text or 'end of input'!r}")

    def _need_ltlp(self, tok: Token):
        if self.dialect != "LTLP":
            raise self.error("guard atoms are only available in the LTLP dialect", tok)

    def within(self) -> Formula:
        t = self.expect("within")
        self._need_ltlp(t)
        self.expect("[")
        lo = self.integer()
        self.expect(",")
        hi = self.bound(allow_inf=True)
        if hi != INF:
            if Fraction(hi).denominator != 1:
                raise self.error("guard bounds must be integers", t)
            hi = int(hi)
        self.expect("]")
        self.expect("@")
        k = self.integer()
        try:
            return Atom(GuardAtom("within", k, lo, hi))
        except ValueError as exc:
            raise self.error(str(exc), t) from None

    def split_guard(self) -> Formula:
        t = self.expect("j")
        self._need_ltlp(t)
        rel = self.tok.text
        self.i += 1
        self.expect("j0")
        self.expect("@")
        k = self.integer()
        offset = self.signed_integer()
        if rel == ">=":
            return Atom(GuardAtom("lower", k, lo=offset))
        return Atom(GuardAtom("upper", k, hi=offset))

    def predicate(self) -> Formula:
        start = self.tok
        terms: list[tuple[str, int]] = []
        sign = -1 if self.accept("-") else 1
        while True:
            coef = Fraction(1)
            if self.tok.kind == "num":
                coef = self.number()
                self.expect("*")
            name_tok = self.tok
            if name_tok.kind != "ident" or name_tok.text in _KEYWORDS:
                raise self.error(f"expected a signal name, found {name_tok.text or 'end of input'!r}")
            if self.signals is not None and name_tok.text not in self.signals:
                raise self.error(f"unknown signal {name_tok.text!r}", name_tok)
            self.i += 1
            terms.append((name_tok.text, quantize(sign * coef, self.factor)))
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                break
        rel_tok = self.tok
        if rel_tok.text not in _RELATIONS:
            raise self.error(f"expected a relation, found {rel_tok.text or 'end of input'!r}")
        self.i += 1
        negative = self.accept("-") is not None
        rhs = self.number()
        if negative:
            rhs = -rhs
        relation = "=" if rel_tok.text == "==" else rel_tok.text
        try:
            return Atom(LinearPredicate(tuple(terms), relation, quantize(rhs, self.factor), self.factor))
        except ValueError as exc:
            raise self.error(str(exc), start) from None


def parse_formula(
    text: str,
    dialect: str = "SSTL",
    *,
    factor: int = 1000,
    signals: Iterable[str] | None = None,
) -> Formula:
    """Parse ``text`` in the given dialect.

    ``signals``, when given, is the ambient signal declaration; any other name
    is rejected.  Coefficients and offsets are quantized by ``factor``.
    """
    d = dialect.upper()
    if d not in DIALECTS:
        raise ValueError(f"unknown dialect {dialect!r}; expected one of {DIALECTS}")
    return _Parser(text, d, factor, signals).parse()
