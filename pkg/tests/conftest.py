import time
from contextlib import contextmanager

import pytest

RESULTS = []


@contextmanager
def criterion(number, title, budget=None):
    """Record one acceptance line; a blown runtime budget counts as a failure."""
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        RESULTS.append((number, "FAIL", title, time.perf_counter() - start))
        raise
    elapsed = time.perf_counter() - start
    ok = budget is None or elapsed < budget
    RESULTS.append((number, "PASS" if ok else "FAIL", title, elapsed))
    assert ok, f"criterion {number} took {elapsed:.1f}s, budget {budget}s"


@pytest.fixture
def acceptance():
    return criterion


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, title, elapsed in sorted(RESULTS):
        terminalreporter.write_line(f"{status} criterion {number}: {title} ({elapsed:.1f}s)")
