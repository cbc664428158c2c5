"""Projection of real time and real values onto ticks and scaled integers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from numbers import Rational, Real

from .formula import (
    INF,
    Always,
    And,
    Atom,
    Eventually,
    Formula,
    Implies,
    Next,
    Not,
    Or,
    RealInterval,
    TickInterval,
    TrueF,
    Until,
    require_stl,
)

INT64_MIN, INT64_MAX = -(2**63), 2**63 - 1


def exact(x) -> Fraction:
    """Exact rational for a number or numeric string.

    Floats go through ``repr`` so that ``0.1`` means one tenth rather than the
    nearest binary double.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x}")
        return Fraction(repr(x))
    if isinstance(x, (str, Decimal)):
        return Fraction(x)
    if isinstance(x, Real):
        return Fraction(repr(float(x)))
    raise TypeError(f"cannot interpret {x!r} as a number")


def discretize_time(t, dt) -> int:
    """``floor(t / dt)`` in exact arithmetic."""
    q_dt = exact(dt)
    if q_dt <= 0:
        raise ValueError(f"tick length must be positive, got {dt}")
    q_t = exact(t)
    if q_t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    return math.floor(q_t / q_dt)


def discretize_interval(iv: RealInterval, dt) -> TickInterval:
    lo = discretize_time(iv.lo, dt)
    hi = INF if iv.hi == INF else discretize_time(iv.hi, dt)
    if hi < lo:  # unreachable from a valid RealInterval, kept as a guard
        raise ValueError(f"discretized interval [{lo},{hi}] has hi < lo")
    return TickInterval(lo, hi)


def discretize_formula(phi: Formula, dt) -> Formula:
    """Replace every real interval with its tick projection; shape is unchanged."""
    require_stl(phi)
    return _disc(phi, dt)


def _disc(phi: Formula, dt) -> Formula:
    match phi:
        case TrueF() | Atom():
            return phi
        case Not(arg=a):
            return Not(_disc(a, dt))
        case Next(arg=a):
            return Next(_disc(a, dt))
        case And(left=l, right=r):
            return And(_disc(l, dt), _disc(r, dt))
        case Or(left=l, right=r):
            return Or(_disc(l, dt), _disc(r, dt))
        case Implies(left=l, right=r):
            return Implies(_disc(l, dt), _disc(r, dt))
        case Until(left=l, right=r, interval=iv):
            return Until(_disc(l, dt), _disc(r, dt), _disc_iv(iv, dt))
        case Eventually(arg=a, interval=iv):
            return Eventually(_disc(a, dt), _disc_iv(iv, dt))
        case Always(arg=a, interval=iv):
            return Always(_disc(a, dt), _disc_iv(iv, dt))
    raise TypeError(f"not a formula node: {phi!r}")


def _disc_iv(iv, dt):
    return None if iv is None else discretize_interval(iv, dt)


def quantize(value, factor: int = 1000) -> int:
    """``round(value * factor)`` with ties rounded away from zero."""
    if not isinstance(factor, int) or factor <= 0:
        raise ValueError(f"quantization factor must be a positive integer, got {factor!r}")
    scaled = exact(value) * factor
    mag = math.floor(abs(scaled) + Fraction(1, 2))
    result = -mag if scaled < 0 else mag
    if not INT64_MIN <= result <= INT64_MAX:
        raise OverflowError(f"{value} x {factor} does not fit in a signed 64-bit integer")
    return result


@dataclass(frozen=True)
class SihReport:
    sampling_frequency: float
    signal_bandwidth: float
    kappa: int
    satisfied: bool

    def __str__(self) -> str:
        rel = ">=" if self.satisfied else "<"
        verdict = "holds" if self.satisfied else "does not hold"
        return (
            f"Fs = {self.sampling_frequency} Hz {rel} {self.kappa} x {self.signal_bandwidth} Hz: "
            f"signal invariance {verdict}"
        )


def check_sih(fs, fm, kappa: int = 2) -> SihReport:
    """Sampling-rate check ``fs >= kappa * fm`` backing the invariance assumption."""
    if not isinstance(kappa, int) or kappa < 2:
        raise ValueError(f"kappa must be an integer >= 2, got {kappa!r}")
    if exact(fs) <= 0:
        raise ValueError(f"sampling frequency must be positive, got {fs}")
    if exact(fm) < 0:
        raise ValueError(f"signal bandwidth must be non-negative, got {fm}")
    return SihReport(fs, fm, kappa, exact(fs) >= kappa * exact(fm))
