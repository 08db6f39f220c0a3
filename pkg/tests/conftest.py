import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

_ACCEPTANCE = {}


@pytest.fixture
def verdict():
    """Record one acceptance line: verdict(n, ok, detail)."""
    def record(n, ok, detail=""):
        _ACCEPTANCE[n] = (ok, detail)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
