import numpy as np
import pytest

from higgsflow.geometry import TorusGeometry

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def geom16():
    return TorusGeometry(16)


@pytest.fixture(scope="session")
def geom32():
    return TorusGeometry(32)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
