"""Discrete traces: one vector of scaled integers per tick."""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .discretize import exact, quantize
from .errors import TraceFormatError
from .printer import fmt_number


@dataclass(frozen=True)
class DiscreteTrace:
    dt: Fraction
    signals: tuple[str, ...]
    values: tuple[tuple[int, ...], ...]
    factor: int = 1000
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "dt", exact(self.dt))
        object.__setattr__(self, "signals", tuple(self.signals))
        object.__setattr__(self, "values", tuple(tuple(v) for v in self.values))
        if self.dt <= 0:
            raise ValueError(f"tick length must be positive, got {self.dt}")
        if self.factor <= 0:
            raise ValueError("quantization factor must be positive")
        if not self.values:
            raise ValueError("a trace needs at least one tick")
        if len(set(self.signals)) != len(self.signals):
            raise ValueError("duplicate signal names")
        n = len(self.signals)
        for k, row in enumerate(self.values):
            if len(row) != n:
                raise ValueError(f"tick {k} has {len(row)} values, expected {n}")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.signals)})

    @classmethod
    def from_reals(cls, signals: Sequence[str], rows: Iterable[Sequence], dt=1, factor: int = 1000):
        """Build a trace from real-valued rows, quantizing every value."""
        return cls(dt, tuple(signals), tuple(tuple(quantize(v, factor) for v in r) for r in rows), factor)

    def __len__(self) -> int:
        return len(self.values)

    def index(self, signal: str) -> int:
        try:
            return self._index[signal]
        except KeyError:
            raise KeyError(f"trace has no signal {signal!r}") from None

    def value(self, signal: str, tick: int) -> int:
        return self.values[tick][self.index(signal)]

    def real_value(self, signal: str, tick: int) -> Fraction:
        return Fraction(self.value(signal, tick), self.factor)

    def state(self, tick: int) -> dict[str, int]:
        return dict(zip(self.signals, self.values[tick]))

    def column(self, signal: str) -> list[int]:
        i = self.index(signal)
        return [row[i] for row in self.values]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("tick",) + self.signals)
        for k, row in enumerate(self.values):
            w.writerow([k] + [fmt_number(Fraction(v, self.factor)) for v in row])
        return buf.getvalue()


def parse_trace_csv(text: str, dt=1, factor: int = 1000) -> DiscreteTrace:
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r and any(c.strip() for c in r)]
    if not rows:
        raise TraceFormatError("empty trace file")
    header = [c.strip() for c in rows[0]]
    if not header or header[0] != "tick":
        raise TraceFormatError("header must start with 'tick'")
    signals = header[1:]
    if not signals:
        raise TraceFormatError("trace declares no signals")
    values = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise TraceFormatError(f"line {lineno}: expected {len(header)} fields, found {len(row)}")
        try:
            tick = int(row[0].strip())
        except ValueError:
            raise TraceFormatError(f"line {lineno}: bad tick {row[0]!r}") from None
        if tick != len(values):
            raise TraceFormatError(f"line {lineno}: expected tick {len(values)}, found {tick}")
        try:
            values.append(tuple(quantize(Fraction(c.strip()), factor) for c in row[1:]))
        except (ValueError, ZeroDivisionError) as exc:
            raise TraceFormatError(f"line {lineno}: unparseable number ({exc})") from None
    if not values:
        raise TraceFormatError("trace has no rows")
    try:
        return DiscreteTrace(dt, tuple(signals), tuple(values), factor)
    except ValueError as exc:
        raise TraceFormatError(str(exc)) from None


def load_trace(path, dt=1, factor: int = 1000) -> DiscreteTrace:
    return parse_trace_csv(Path(path).read_text(encoding="utf-8"), dt, factor)
