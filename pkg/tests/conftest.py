import os
import sys
import time
from contextlib import contextmanager

sys.path.insert(0, os.path.dirname(__file__))

_CRITERIA: dict[int, str] = {}


@contextmanager
def criterion(number: int, title: str):
    """Record one PASS/FAIL line for an acceptance criterion."""
    t0 = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        line = f"criterion {number} FAIL: {title} ({time.perf_counter() - t0:.1f}s) :: {exc}"
        _CRITERIA[number] = line
        print(line)
        raise
    line = f"criterion {number} PASS: {title} ({time.perf_counter() - t0:.1f}s)"
    _CRITERIA[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[n].splitlines()[0][:400])
