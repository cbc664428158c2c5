"""Synchronous signal temporal logic: monitoring, translation to LTL with
predicates, and explicit-state model checking of tick-driven models."""

from .automata import BuchiAutomaton, label_satisfiable, ltl_to_buchi, negate
from .discretize import SihReport, check_sih, discretize_formula, discretize_interval, discretize_time, quantize
from .errors import (
    ConfigurationError,
    DialectError,
    FormulaSyntaxError,
    ModelError,
    ResourceLimit,
    SstlError,
    TraceFormatError,
    UnboundObligation,
)
from .formula import (
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
    TrueF,
    Until,
)
from .models import heart_abstract, load_model, pedestrian_crossing, traffic_light
from .monitor import eval_all, eval_at, stl_oracle
from .parser import parse_formula
from .printer import to_text
from .search import Counterexample, Product, VerificationResult, find_accepting_cycle, verify
from .system import TransitionSystem, parse_model, simulate
from .trace import DiscreteTrace, load_trace, parse_trace_csv
from .translate import (
    ObligationRegistry,
    eval_ltlp,
    eval_ltlp_all,
    live_obligation_count,
    translate,
    translate_impl,
)
from .verdict import Verdict

__all__ = [
    "Always",
    "And",
    "Atom",
    "BuchiAutomaton",
    "ConfigurationError",
    "Counterexample",
    "DialectError",
    "DiscreteTrace",
    "Eventually",
    "Formula",
    "FormulaSyntaxError",
    "GuardAtom",
    "Implies",
    "LinearPredicate",
    "ModelError",
    "Next",
    "Not",
    "ObligationRegistry",
    "Or",
    "Product",
    "RealInterval",
    "ResourceLimit",
    "SihReport",
    "SstlError",
    "TRUE",
    "TickInterval",
    "TraceFormatError",
    "TransitionSystem",
    "TrueF",
    "UnboundObligation",
    "Until",
    "Verdict",
    "VerificationResult",
    "check_sih",
    "discretize_formula",
    "discretize_interval",
    "discretize_time",
    "eval_all",
    "eval_at",
    "eval_ltlp",
    "eval_ltlp_all",
    "find_accepting_cycle",
    "heart_abstract",
    "label_satisfiable",
    "live_obligation_count",
    "load_model",
    "load_trace",
    "ltl_to_buchi",
    "negate",
    "parse_formula",
    "parse_model",
    "parse_trace_csv",
    "pedestrian_crossing",
    "quantize",
    "simulate",
    "stl_oracle",
    "to_text",
    "traffic_light",
    "translate",
    "translate_impl",
    "verify",
]
