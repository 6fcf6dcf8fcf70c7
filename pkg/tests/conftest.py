import os

import pytest
from hypothesis import settings

from cpbfridge.otto import OttoConfig
from cpbfridge.qubit import QubitParams, ResonatorParams

settings.register_profile("ci", max_examples=50, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))


@pytest.fixture
def qubit():
    return QubitParams(6.8e9, 3.5e9, -2, 3)


@pytest.fixture
def qubit2():
    return QubitParams(6.8e9, 3.5e9, 0, 1)


@pytest.fixture
def bare_resonators():
    """Device resonators with bare couplings 140 MHz (cold) and 250 MHz (hot)."""
    return (
        ResonatorParams(4.718e9, 2.0, 140e6, role="cold"),
        ResonatorParams(8.001e9, 2.0, 250e6, role="hot"),
    )


@pytest.fixture
def otto_cfg():
    return OttoConfig.device_defaults(10e6)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
