"""The property table: every (model, property) pair with its expected verdict."""

from __future__ import annotations

from dataclasses import dataclass

from .discretize import discretize_formula
from .formula import Formula
from .models import heart_abstract, pedestrian_crossing, traffic_light
from .parser import parse_formula


@dataclass(frozen=True)
class Case:
    system: str
    model: str  # name accepted by models.load_model
    prop: str
    text: str
    dialect: str  # STL for properties written in seconds
    expected: str  # Satisfied | Violated

    def formula(self, dt) -> Formula:
        phi = parse_formula(self.text, self.dialect)
        if self.dialect == "STL":
            phi = discretize_formula(phi, dt)
        return phi


TRAFFIC = [
    ("mutex", "G !(NS_green = 1 && EW_green = 1)", "Satisfied"),
    ("NS_safe", "G (NS_green = 1 -> EW_red = 1)", "Satisfied"),
    ("EW_safe", "G (EW_green = 1 -> NS_red = 1)", "Satisfied"),
    ("fairness", "G F (NS_green = 1)", "Violated"),
    ("liveness_NS", "F (NS_green = 1)", "Satisfied"),
    ("response_NS_yellow", "G (NS_green = 1 -> F (NS_yellow = 1))", "Satisfied"),
    ("bounded_NS_yellow", "G (NS_green = 1 -> F[3,5] (NS_yellow = 1))", "Satisfied"),
]

PEDESTRIAN = [
    ("no_conflict", "G !(cars_green = 1 && walk_signal = 1)", "Satisfied"),
    ("queue_bounded", "G (waiting_peds <= 5 && waiting_peds >= 0)", "Satisfied"),
    ("threshold_walk", "G (waiting_peds >= 2 -> F (walk_signal = 1))", "Violated"),
    ("bounded_wait", "G ((cars_green = 1 && waiting_peds >= 2) -> F[2,5] (walk_signal = 1))", "Violated"),
]

# thresholds V_a,th = V_v,th = 80 mV
HEART = [
    ("AV", "G (A_EGM >= 80 -> F[0.180,0.240] (V_EGM >= 80))"),
    ("VV", "G (V_EGM >= 80 -> F[0.6,1.00] (V_EGM > 80))"),
    ("liveness_A", "F (A_EGM > 80)"),
    ("liveness_V", "F (V_EGM > 80)"),
]

DISEASES = ("av_block", "lbb_block", "rbb_block")


def table_cases() -> list[Case]:
    """The fifteen properties of the three case studies."""
    cases = [Case("traffic_light", "traffic_light", p, t, "SSTL", e) for p, t, e in TRAFFIC]
    cases += [Case("pedestrian_crossing", "pedestrian_crossing", p, t, "SSTL", e) for p, t, e in PEDESTRIAN]
    cases += [Case("heart (healthy)", "heart_healthy", p, t, "STL", "Satisfied") for p, t in HEART]
    return cases


def disease_cases() -> list[Case]:
    """Each disease breaks A to V conduction and nothing else."""
    return [
        Case(f"heart ({d})", f"heart_{d}", p, t, "STL", "Violated" if p == "AV" else "Satisfied")
        for d in DISEASES
        for p, t in HEART
    ]


def all_cases() -> list[Case]:
    return table_cases() + disease_cases()


_BUILDERS = {
    "traffic_light": traffic_light,
    "pedestrian_crossing": pedestrian_crossing,
    **{f"heart_{c}": (lambda c=c: heart_abstract(c)) for c in ("healthy",) + DISEASES},
}


def build_model(case: Case):
    return _BUILDERS[case.model]()
