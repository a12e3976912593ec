"""Shared pytest wiring: the acceptance-criteria report."""

from __future__ import annotations

ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, ok: bool, detail: str) -> str:
    """Register and print one acceptance-criterion verdict line."""
    line = f"CRITERION {number} {'PASS' if ok else 'FAIL'} — {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
