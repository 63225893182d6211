import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tospdc import HE11, HE12, FiberSpec, design_point, solve_mode, triplet_rate  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def design():
    return design_point()


@pytest.fixture(scope="session")
def fiber(design):
    return FiberSpec(design.fiber.core_radius)


@pytest.fixture(scope="session")
def triplet_mode(design):
    return solve_mode(design.fiber, design.phasematch.degenerate_freq, HE11)


@pytest.fixture(scope="session")
def pump_mode(design):
    return solve_mode(design.fiber, design.phasematch.pump_freq, HE12)


@pytest.fixture(scope="session")
def design_rate(design):
    return triplet_rate(design)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
