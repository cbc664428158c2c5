"""Three-valued verdicts.

Evaluation code works on small integers ordered ``F < U < T`` so that Kleene
conjunction is ``min``, disjunction is ``max`` and negation is ``T - v``.
"""

from __future__ import annotations

from enum import Enum

F, U, T = 0, 1, 2


class Verdict(Enum):
    TRUE = "True"
    FALSE = "False"
    INCONCLUSIVE = "Inconclusive"

    @classmethod
    def of(cls, v: int) -> Verdict:
        return _FROM_INT[v]

    @property
    def code(self) -> int:
        return _TO_INT[self]

    @property
    def conclusive(self) -> bool:
        return self is not Verdict.INCONCLUSIVE

    def __str__(self) -> str:
        return self.value


_FROM_INT = {F: Verdict.FALSE, U: Verdict.INCONCLUSIVE, T: Verdict.TRUE}
_TO_INT = {v: k for k, v in _FROM_INT.items()}


def from_bool(b: bool) -> int:
    return T if b else F
