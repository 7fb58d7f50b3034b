import time
from contextlib import contextmanager

import pytest

_RESULTS = {}


@pytest.fixture
def criterion():
    """Time a block, check it against its budget and record a pass/fail line."""

    @contextmanager
    def run(number, title, budget=None):
        t0 = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            dt = time.perf_counter() - t0
            within = budget is None or dt < budget
            _RESULTS[number] = (title, ok and within, dt, budget)
        if budget is not None:
            assert dt < budget, f"criterion {number} took {dt:.1f} s (budget {budget} s)"

    return run


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, ok, dt, budget = _RESULTS[number]
        limit = "" if budget is None else f" / {budget:g} s"
        terminalreporter.write_line(f"{number:>2}. {'PASS' if ok else 'FAIL'}  {title}  "
                                    f"[{dt:.2f} s{limit}]")
