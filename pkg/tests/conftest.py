import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_LINES = []


class Recorder:
    """Collects one PASS/FAIL line per check; the test fails if any check failed."""

    def __init__(self, number, title):
        self.number, self.title = number, title
        self.checks = []

    def check(self, name, ok, detail=""):
        self.checks.append((name, bool(ok), detail))

    def finish(self):
        ok = all(c[1] for c in self.checks)
        _LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {self.number}: {self.title}")
        for name, good, detail in self.checks:
            _LINES.append(f"    {'ok  ' if good else 'FAIL'} {name}" + (f" ({detail})" if detail else ""))
        failed = [c[0] for c in self.checks if not c[1]]
        assert not failed, f"criterion {self.number} failed checks: {failed}"


@pytest.fixture
def criterion():
    recs = []

    def make(number, title):
        recs.append(Recorder(number, title))
        return recs[-1]

    return make


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
