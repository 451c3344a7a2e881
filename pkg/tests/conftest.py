import pytest

from selfref.naming import Opaque, TermRef, build_model
from selfref.syntax import Atomic

ACCEPTANCE_LINES = []


@pytest.fixture
def lagadonian_model():
    """d names itself."""
    return build_model([("d", TermRef(Atomic("d")))])


@pytest.fixture
def laputan_model():
    """a and b name the same non-linguistic object."""
    return build_model([("a", Opaque("v")), ("b", Opaque("v"))])


@pytest.fixture
def agreement_model():
    return build_model([("a", Opaque("v")), ("b", TermRef(Atomic("a")))])


@pytest.fixture
def acceptance():
    def record(criterion, passed, detail=""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
