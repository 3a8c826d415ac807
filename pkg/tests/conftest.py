import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

GOLDEN = Path(__file__).parent / "golden"

_criteria = []


class CriterionLog:
    """Collects one pass/fail line per acceptance criterion."""

    def check(self, number, ok, detail):
        _criteria.append((number, bool(ok), detail))
        return ok


@pytest.fixture(scope="session")
def criterion():
    return CriterionLog()


@pytest.fixture(scope="session")
def golden_dir():
    return GOLDEN


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(_criteria, key=lambda c: c[0]):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
