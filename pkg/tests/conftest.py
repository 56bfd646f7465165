import contextlib
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA: dict[int, tuple[str, str, str]] = {}


class _Outcome:
    def __init__(self):
        self.notes: list[str] = []

    def note(self, text: str):
        self.notes.append(text)


@contextlib.contextmanager
def _criterion(number: int, title: str, budget: float):
    """Record PASS/FAIL for one acceptance criterion, including its time budget."""
    out = _Outcome()
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield out
        elapsed = time.perf_counter() - start
        out.note(f"{elapsed:.2f}s of {budget:g}s")
        assert elapsed < budget, f"criterion {number} took {elapsed:.2f}s, budget {budget:g}s"
        status = "PASS"
    except BaseException as exc:
        out.note(f"{type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}")
        raise
    finally:
        line = f"{status} criterion {number:2d}: {title} ({'; '.join(out.notes)})"
        _CRITERIA[number] = (status, title, line)
        print(line)


@pytest.fixture
def criterion():
    return _criterion


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[n][2])
