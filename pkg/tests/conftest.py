import numpy as np
import pytest

from defbec.config import RunConfig


@pytest.fixture(scope="session")
def sodium_config():
    return RunConfig(-20e6, 20e6)


@pytest.fixture(scope="session")
def sodium_atoms(sodium_config):
    return sodium_config.atoms()


@pytest.fixture(scope="session")
def detunings():
    return np.linspace(-2 * np.pi * 20e6, 2 * np.pi * 20e6, 41)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
