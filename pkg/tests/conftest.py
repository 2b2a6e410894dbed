import numpy as np
import pytest

from nfam.modindex import NANOCONTACT_AMPLITUDE_LAW, NANOCONTACT_FREQUENCY_LAW

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def flaw():
    return NANOCONTACT_FREQUENCY_LAW


@pytest.fixture(scope="session")
def alaw():
    return NANOCONTACT_AMPLITUDE_LAW


@pytest.fixture
def rng():
    return np.random.default_rng(20100421)


@pytest.fixture
def report():
    """Record one pass/fail line per acceptance criterion."""

    def _report(name: str, ok: bool, detail: str = "") -> bool:
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
