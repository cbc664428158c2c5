"""Concrete syntax for formulas.  ``parse_formula(to_text(phi)) == phi``."""

from __future__ import annotations

from fractions import Fraction

from .formula import (
    INF,
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
)

# binding strength, higher binds tighter
_IMPLIES, _OR, _AND, _UNTIL, _UNARY, _ATOM = 1, 2, 3, 4, 5, 6


def fmt_number(x) -> str:
    """Exact decimal text for a rational, falling back to ``n/d``."""
    if x == INF:
        return "inf"
    q = Fraction(x)
    if q.denominator == 1:
        return str(q.numerator)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{q.numerator}/{q.denominator}"
    places = max(twos, fives)
    scaled = q * 10**places
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled.numerator)).rjust(places + 1, "0")
    text = f"{digits[:-places]}.{digits[-places:]}".rstrip("0").rstrip(".")
    return sign + text


def fmt_interval(iv) -> str:
    if iv is None:
        return ""
    return f"[{fmt_number(iv.lo)},{fmt_number(iv.hi)}]"


def fmt_predicate(p: LinearPredicate) -> str:
    parts = []
    for i, (sig, c) in enumerate(p.terms):
        coef = Fraction(c, p.factor)
        neg = coef < 0
        mag = -coef if neg else coef
        body = sig if mag == 1 else f"{fmt_number(mag)}*{sig}"
        if i == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    rhs = fmt_number(Fraction(p.offset, p.factor))
    return f"{' '.join(parts)} {p.relation} {rhs}"


def fmt_guard(g: GuardAtom) -> str:
    k = g.obligation
    if g.kind == "within":
        return f"within[{g.lo},{fmt_number(g.hi)}]@{k}"
    if g.kind == "lower":
        return f"j>=j0@{k}{_signed(g.lo)}"
    return f"j<=j0@{k}{_signed(g.hi)}"


def _signed(n) -> str:
    return f"-{-n}" if n < 0 else f"+{n}"


def _op(name: str, node) -> str:
    suffix = f"@{node.obligation}" if node.obligation is not None else ""
    return name + suffix + fmt_interval(node.interval)


def _level(phi: Formula) -> int:
    match phi:
        case Implies():
            return _IMPLIES
        case Or():
            return _OR
        case And():
            return _AND
        case Until():
            return _UNTIL
        case Not() | Next() | Eventually() | Always():
            return _UNARY
        case _:
            return _ATOM


def _wrap(phi: Formula, need: int, paren_atoms: bool = False) -> str:
    text = to_text(phi)
    lvl = _level(phi)
    if lvl < need or (paren_atoms and isinstance(phi, Atom)):
        return f"({text})"
    return text


def to_text(phi: Formula) -> str:
    match phi:
        case TrueF():
            return "true"
        case Atom(pred=LinearPredicate() as p):
            return fmt_predicate(p)
        case Atom(pred=GuardAtom() as g):
            return fmt_guard(g)
        case Not(arg=a):
            return "!" + _wrap(a, _UNARY, paren_atoms=True)
        case Next(arg=a):
            return "X " + _wrap(a, _UNARY, paren_atoms=True)
        case Eventually(arg=a):
            return _op("F", phi) + " " + _wrap(a, _UNARY, paren_atoms=True)
        case Always(arg=a):
            return _op("G", phi) + " " + _wrap(a, _UNARY, paren_atoms=True)
        case Until(left=l, right=r):
            return f"{_wrap(l, _UNARY, True)} {_op('U', phi)} {_wrap(r, _UNTIL, True)}"
        case And(left=l, right=r):
            return f"{_wrap(l, _AND)} && {_wrap(r, _AND + 1)}"
        case Or(left=l, right=r):
            return f"{_wrap(l, _OR)} || {_wrap(r, _OR + 1)}"
        case Implies(left=l, right=r):
            return f"{_wrap(l, _IMPLIES + 1)} -> {_wrap(r, _IMPLIES)}"
    raise TypeError(f"not a formula node: {phi!r}")
