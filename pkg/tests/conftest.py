"""Shared test plumbing.

The acceptance fixture records one line per acceptance check; the lines
are printed as their own section at the end of the run so the verdicts
are readable without grepping the test names.
"""

import pytest

_RECORDED = []


@pytest.fixture
def acceptance():
    """Record a named pass/fail verdict, then enforce it."""
    def record(tag, ok, detail=""):
        _RECORDED.append((tag, bool(ok), detail))
        assert ok, f"{tag}: {detail}"
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RECORDED:
        return
    terminalreporter.section("acceptance criteria")
    for tag, ok, detail in _RECORDED:
        status = "PASS" if ok else "FAIL"
        line = f"[{status}] {tag}"
        if detail:
            line += f" :: {detail}"
        terminalreporter.write_line(line)
