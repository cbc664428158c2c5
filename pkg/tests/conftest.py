"""Collects the acceptance-criterion verdicts and prints them after the run."""

from __future__ import annotations

CRITERIA: dict[str, list[tuple[bool, str]]] = {}


def record(criterion: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}" + (f": {detail}" if detail else "")
    print(line)
    CRITERIA.setdefault(criterion, []).append((ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(CRITERIA):
        parts = CRITERIA[name]
        ok = all(p for p, _ in parts)
        # a passing criterion lists all its notes, a failing one only the failures
        details = "; ".join(d for p, d in parts if d and (ok or not p))
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {details}" if details else ""))
