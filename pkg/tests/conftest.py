import pytest

from suspopt.model import LIGHT, MID_HEAVY, SuspensionDesign

ACCEPTANCE_LINES = []


@pytest.fixture
def light():
    return LIGHT


@pytest.fixture
def mid_heavy():
    return MID_HEAVY


@pytest.fixture
def design():
    return SuspensionDesign(f_n=1.5, zeta_p=0.3, zeta_n=0.3)


@pytest.fixture
def report():
    """Record one acceptance line; all lines are printed in the terminal summary."""

    def _report(criterion, ok, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
