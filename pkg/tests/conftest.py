import numpy as np
import pytest

from hetnet_sim.config import ScenarioConfig

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report_line():
    """Record a one-line acceptance verdict, printed in the terminal summary."""
    return _ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def small_cfg():
    return ScenarioConfig(area_side_m=1000.0, num_drops=1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
