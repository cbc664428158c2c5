"""Command-line front end: ``sstl check | translate | verify | simulate | table``.

Exit codes: 0 when every requested verdict is Satisfied or True, 1 when any
is Violated, False or Inconclusive, 2 for usage and input errors, 3 when a
search budget ran out.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from .casestudies import all_cases, build_model
from .discretize import discretize_formula, exact
from .errors import SstlError
from .formula import Formula
from .models import load_model
from .monitor import eval_all
from .parser import parse_formula
from .printer import fmt_number
from .search import DEFAULT_MAX_DEPTH, DEFAULT_MAX_STATES, verify
from .system import simulate
from .trace import load_trace
from .translate import ENCODINGS, ObligationRegistry, translate_with

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    inputs: dict
    verdicts: list
    counterexample: str | None = None
    states_explored: int | None = None
    wall_time: float | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> str:
        data = asdict(self)
        if self.wall_time is None:
            del data["wall_time"]
        return json.dumps(data, sort_keys=True, indent=2)


def exit_code(verdicts) -> int:
    if "ResourceLimit" in verdicts:
        return EXIT_LIMIT
    return EXIT_OK if all(v in ("Satisfied", "True") for v in verdicts) else EXIT_FAIL


# -- shared argument handling -----------------------------------------------------


def read_formula_text(arg: str) -> str:
    """``--formula`` takes either a file path or the formula itself."""
    path = Path(arg)
    try:
        if path.is_file():
            return path.read_text(encoding="utf-8").strip()
    except OSError:
        pass
    return arg


def load_formula(args, *, dt=None) -> Formula:
    """Parse ``--formula`` and bring it to SSTL.

    STL input needs ``--dt`` and is discretized with it; SSTL input must not
    carry ``--dt`` since its intervals are already in ticks.
    """
    text = read_formula_text(args.formula)
    dialect = args.dialect.upper()
    if dialect == "STL":
        if args.dt is None:
            raise UsageError("--dt is required for STL formulas")
        return discretize_formula(parse_formula(text, "STL"), exact(args.dt))
    if args.dt is not None:
        raise UsageError("--dt is not accepted for SSTL formulas; their intervals are already in ticks")
    return parse_formula(text, "SSTL")


def _timed(args, report: RunReport, start: float) -> RunReport:
    if args.timing:
        report.wall_time = round(time.perf_counter() - start, 6)
    return report


def _emit(args, report: RunReport, text: str) -> None:
    print(report.to_json() if args.json else text)


# -- commands ---------------------------------------------------------------------


def cmd_check(args) -> int:
    start = time.perf_counter()
    phi = load_formula(args)
    dt = exact(args.dt) if args.dt is not None else 1
    w = load_trace(args.trace, dt=dt, factor=args.factor)
    row = eval_all(phi, w)
    if args.tick is not None:
        if not 0 <= args.tick < len(w):
            raise UsageError(f"--tick {args.tick} is outside the trace (length {len(w)})")
        ticks = [args.tick]
    else:
        ticks = list(range(len(w)))
    verdicts = [row[t].value for t in ticks]
    if args.dump_eval:
        lines = ["tick,verdict"] + [f"{t},{row[t].value}" for t in range(len(w))]
        Path(args.dump_eval).write_text("\n".join(lines) + "\n", encoding="utf-8")
    report = RunReport(
        "check",
        {"formula": args.formula, "trace": args.trace, "dt": args.dt, "tick": args.tick, "dialect": args.dialect},
        verdicts,
        details={"sstl": str(phi), "ticks": ticks},
    )
    _timed(args, report, start)
    text = "\n".join(f"tick {t}: {v}" for t, v in zip(ticks, verdicts))
    _emit(args, report, f"{phi}\n{text}")
    return exit_code(verdicts)


def cmd_translate(args) -> int:
    phi = load_formula(args)
    psi = translate_with(phi, args.encoding)
    reg = ObligationRegistry.of(psi)
    report = RunReport(
        "translate",
        {"formula": args.formula, "dt": args.dt, "encoding": args.encoding, "dialect": args.dialect},
        [],
        details={"sstl": str(phi), "ltlp": str(psi), "obligation_bound": _num(reg.bound)},
    )
    _emit(args, report, str(psi))
    return EXIT_OK


def _num(x):
    return fmt_number(x) if isinstance(x, (Fraction, float)) else x


def _verify_report(sys_, phi, args, inputs, out: str | None) -> tuple[RunReport, str]:
    start = time.perf_counter()
    result = verify(sys_, phi, args.encoding, max_states=args.max_states, max_depth=args.max_depth)
    cex_path = None
    text = [f"{sys_.name}: {result.status} ({result.states_explored} product states)"]
    if result.counterexample is not None:
        if out:
            Path(out).write_text(result.counterexample.dumps() + "\n", encoding="utf-8")
            cex_path = out
            text.append(f"counterexample written to {out}")
        else:
            text.append(result.counterexample.to_text())
    report = RunReport(
        "verify",
        inputs,
        [result.status],
        cex_path,
        result.states_explored,
        details={"ltlp": str(result.ltlp), "automaton_states": result.automaton_states},
    )
    _timed(args, report, start)
    return report, "\n".join(text)


def cmd_verify(args) -> int:
    sys_ = load_model(args.model)
    phi = load_formula(args)
    if args.dt is not None and exact(args.dt) != exact(sys_.dt):
        raise UsageError(f"--dt {args.dt} does not match the model's tick length {fmt_number(exact(sys_.dt))}")
    inputs = {
        "model": args.model,
        "formula": args.formula,
        "dt": args.dt,
        "encoding": args.encoding,
        "dialect": args.dialect,
        "max_states": args.max_states,
        "max_depth": args.max_depth,
    }
    report, text = _verify_report(sys_, phi, args, inputs, args.out)
    _emit(args, report, text)
    return exit_code(report.verdicts)


def cmd_simulate(args) -> int:
    sys_ = load_model(args.model)
    w = simulate(sys_, args.ticks, seed=args.seed)
    csv = w.to_csv()
    if args.out:
        Path(args.out).write_text(csv, encoding="utf-8")
    else:
        sys.stdout.write(csv)
    return EXIT_OK


def cmd_table(args) -> int:
    reports = []
    rows = []
    all_match = True
    for case in all_cases():
        sys_ = build_model(case)
        phi = case.formula(sys_.dt)
        inputs = {"model": case.model, "property": case.prop, "formula": case.text, "encoding": args.encoding}
        report, _ = _verify_report(sys_, phi, args, inputs, None)
        report.command = "table"
        report.details["expected"] = case.expected
        verdict = report.verdicts[0]
        match = verdict == case.expected
        all_match &= match
        reports.append(report)
        rows.append((case.system, case.prop, case.expected, verdict, report.states_explored, match))
    if args.json:
        print("[\n" + ",\n".join(r.to_json() for r in reports) + "\n]")
    else:
        head = ("system", "property", "expected", "verdict", "states", "")
        widths = [max(len(str(r[i])) for r in rows + [head]) for i in range(5)]
        print("  ".join(h.ljust(wd) for h, wd in zip(head, widths)))
        for r in rows:
            cells = [str(c).ljust(wd) for c, wd in zip(r, widths)]
            print("  ".join(cells) + ("  ok" if r[5] else "  MISMATCH"))
        print(f"{sum(r[5] for r in rows)}/{len(rows)} verdicts as expected")
    return EXIT_OK if all_match else EXIT_FAIL


# -- argument parsing -------------------------------------------------------------


def _formula_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--formula", required=True, help="formula text or a file containing it")
    p.add_argument("--dialect", choices=("stl", "sstl"), default="sstl", type=str.lower)
    p.add_argument("--dt", help="tick length in seconds; required for STL, rejected for SSTL")


def _search_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--encoding", choices=ENCODINGS, default="impl")
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    p.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sstl", description="Monitor, translate and model-check SSTL properties.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON run report")
    common.add_argument("--timing", action="store_true", help="include wall time in the report")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="evaluate a formula on a trace CSV")
    _formula_args(p)
    p.add_argument("--trace", required=True)
    p.add_argument("--tick", type=int, help="report a single tick instead of all of them")
    p.add_argument("--factor", type=int, default=1000, help="quantization factor for trace values")
    p.add_argument("--dump-eval", metavar="PATH", help="write the per-tick verdicts as CSV")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("translate", parents=[common], help="print the LTL_P translation")
    _formula_args(p)
    p.add_argument("--encoding", choices=ENCODINGS, default="impl")
    p.set_defaults(run=cmd_translate)

    p = sub.add_parser("verify", parents=[common], help="model-check a formula against a model")
    _formula_args(p)
    p.add_argument("--model", required=True, help="built-in model name or model file")
    p.add_argument("--out", help="write the counterexample JSON here")
    _search_args(p)
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("simulate", parents=[common], help="write one seeded run of a model as CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--ticks", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(run=cmd_simulate)

    p = sub.add_parser("table", parents=[common], help="run every built-in case-study property")
    _search_args(p)
    p.set_defaults(run=cmd_table)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (UsageError, SstlError, OSError, ValueError) as exc:
        print(f"sstl {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
