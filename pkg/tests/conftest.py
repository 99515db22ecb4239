"""Collects acceptance verdicts and prints them after the run."""

import pytest

_LINES: list[tuple[int, str]] = []


@pytest.fixture
def report():
    """``report(n, ok, text)`` records one acceptance line and prints it."""

    def add(n: int, ok: bool, text: str) -> None:
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {text}"
        _LINES.append((n, line))
        print(line)

    return add


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_LINES):
        terminalreporter.write_line(line)
