import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

_ACCEPTANCE = {}
_NOTES = {}


@pytest.fixture
def acceptance_note(request):
    """Record a line shown under the criterion's PASS/FAIL summary."""
    keys = [m.name for m in request.node.iter_markers() if m.name.startswith("criterion_")]

    def note(text):
        for key in keys:
            _NOTES.setdefault(key, []).append(text)
    return note


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for mark in report.keywords:
        if mark.startswith("criterion_"):
            prev = _ACCEPTANCE.get(mark, True)
            _ACCEPTANCE[mark] = prev and report.outcome == "passed"


def pytest_configure(config):
    for i in range(1, 13):
        config.addinivalue_line("markers", f"criterion_{i}: acceptance criterion {i}")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for i in range(1, 13):
        key = f"criterion_{i}"
        if key in _ACCEPTANCE:
            terminalreporter.write_line(f"criterion {i:2d}: {'PASS' if _ACCEPTANCE[key] else 'FAIL'}")
            for text in _NOTES.get(key, []):
                terminalreporter.write_line(f"    {text}")
