from __future__ import annotations

import pytest

_LINES: list = []


@pytest.fixture
def report():
    """Record one pass/fail line per acceptance criterion and assert it."""

    def _report(label: str, ok: bool, detail: str = "") -> None:
        line = f"{label}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else "")
        print(line)
        _LINES.append(line)
        assert ok, line

    return _report


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
