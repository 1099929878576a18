import contextlib
import time

import pytest

_CRITERIA = []


@contextlib.contextmanager
def _record(label):
    start = time.perf_counter()
    info = {}
    try:
        yield info
    except pytest.skip.Exception as exc:
        _CRITERIA.append(("SKIP", label, str(exc)))
        raise
    except BaseException as exc:
        _CRITERIA.append(("FAIL", label, f"{type(exc).__name__}: {exc}".splitlines()[0]))
        raise
    elapsed = info.get("runtime", time.perf_counter() - start)
    _CRITERIA.append(("PASS", label, f"{elapsed:.4f}s"))


@pytest.fixture
def criterion():
    """Context manager that records one acceptance line per criterion.

    Setting ``info["runtime"]`` on the yielded dict reports that timing
    instead of the wall time of the whole block.
    """
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for status, label, detail in _CRITERIA:
        terminalreporter.write_line(f"[{status}] {label} ({detail})")
