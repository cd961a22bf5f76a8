import time
from contextlib import contextmanager

import pytest

_LINES: list[str] = []


class _Criterion:
    def __init__(self, number: int, title: str, budget_s: float):
        self.number, self.title, self.budget_s = number, title, budget_s
        self.detail = ""


@pytest.fixture
def criterion(request):
    """Time a block against a budget and record one PASS/FAIL line for it."""

    @contextmanager
    def run(number: int, title: str, budget_s: float):
        c = _Criterion(number, title, budget_s)
        t0 = time.perf_counter()
        ok = False
        try:
            yield c
            ok = True
        finally:
            elapsed = time.perf_counter() - t0
            within = elapsed <= budget_s
            status = "PASS" if ok and within else "FAIL"
            why = "" if ok else " (assertion failed)"
            if ok and not within:
                why = " (over budget)"
            line = f"[{status}] criterion {number}: {title} ({elapsed:.1f}s / budget {budget_s:.0f}s){why}"
            if c.detail:
                line += f" -- {c.detail}"
            _LINES.append(line)
            if ok:
                assert within, line

    return run


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
        terminalreporter.write_line(line)
