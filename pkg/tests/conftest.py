"""Shared fixtures and the acceptance-line reporter.

Acceptance tests record one human-readable pass/fail line per criterion;
those lines are replayed in a terminal section after the run so they stay
visible regardless of pytest's output capturing.
"""

import pytest

from kgconfine.params import PhysicalParams

_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.line(line)


@pytest.fixture
def fig1_params() -> PhysicalParams:
    # Benchmark potential set used for all profile figures.
    return PhysicalParams(a1=0.1, a2=0.1, a3=0.1, mass=0.5, hbar_c=1.0)
