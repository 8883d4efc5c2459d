"""Shared fixtures plus the acceptance-line reporter.

Acceptance checks record one [PASS]/[FAIL] line each; the hook replays them
in the terminal summary so they are visible even under output capture.
"""

import numpy as np
import pytest

from drivenjc import ModelParams, RatePair, dressed_spectrum

ACCEPTANCE_LINES = []


def record_criterion(number: int, ok: bool, detail: str) -> bool:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def spectrum_std():
    """Workhorse parameter point used across the suite."""
    return dressed_spectrum(ModelParams(Omega=0.2, xi=0.1))


@pytest.fixture(scope="session")
def rates_std():
    return RatePair(0.002, 0.006)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
