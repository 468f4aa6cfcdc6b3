import time
from contextlib import contextmanager

import pytest


class Criterion:
    """Sub-checks of one acceptance criterion, reported as a single line."""

    def __init__(self, number, title):
        self.number = number
        self.title = title
        self.checks = []
        self.notes = []
        self.elapsed = None

    def check(self, label, passed, detail=""):
        self.checks.append((label, bool(passed), detail))
        return bool(passed)

    def note(self, text):
        self.notes.append(text)

    @contextmanager
    def timed(self, limit):
        t0 = time.perf_counter()
        yield
        self.elapsed = time.perf_counter() - t0
        self.check(f"runtime < {limit:g} s", self.elapsed < limit, f"{self.elapsed:.2f} s")

    @property
    def passed(self):
        return bool(self.checks) and all(ok for _, ok, _ in self.checks)

    def failures(self):
        return [f"{label} ({detail})" if detail else label for label, ok, detail in self.checks if not ok]

    def assert_passed(self):
        assert self.passed, f"criterion {self.number} failed: " + "; ".join(self.failures())


_RESULTS = {}


@pytest.fixture
def acceptance():
    def make(number, title):
        crit = Criterion(number, title)
        _RESULTS[number] = crit
        return crit

    return make


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_RESULTS):
        crit = _RESULTS[number]
        status = "PASS" if crit.passed else "FAIL"
        done = sum(ok for _, ok, _ in crit.checks)
        line = f"[{status}] criterion {number}: {crit.title} ({done}/{len(crit.checks)} checks)"
        if not crit.passed:
            line += " failed: " + "; ".join(crit.failures())
        tr.write_line(line)
        for text in crit.notes:
            tr.write_line(f"         note: {text}")
