"""Shared fixtures: working precision and cached trajectories."""

import mpmath as mp
import pytest
from hypothesis import HealthCheck, settings

from tronquee.painleve import Params, solve

settings.register_profile(
    "tronquee",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("tronquee")


@pytest.fixture(autouse=True)
def working_precision():
    """Run every test at 192 bits and restore the ambient precision afterwards."""
    with mp.workprec(192):
        yield 192


@pytest.fixture(scope="session")
def airy_traj():
    """alpha = 0, omega = 1: sigma vanishes identically and w = Ai'/Ai."""
    return solve(Params(0, 1), s_end=-8)


@pytest.fixture(scope="session")
def hm_traj():
    """Pole-free member at alpha = 0.3."""
    with mp.workprec(192):
        return solve(Params("0.3", 0), s_end=-16)


@pytest.fixture(scope="session")
def classic_hm_traj():
    """alpha = -1/4, omega = 0: the classical Hastings-McLeod solution."""
    with mp.workprec(192):
        return solve(Params("-0.25", 0), s_end=-12)


@pytest.fixture(scope="session")
def oscillatory_traj():
    """alpha = 0, omega = 2: oscillatory member with real poles."""
    with mp.workprec(192):
        return solve(Params(0, 2), s_end=-16)


@pytest.fixture(scope="session")
def mixed_traj():
    """alpha = 0.2, omega = 0.5."""
    with mp.workprec(192):
        return solve(Params("0.2", "0.5"), s_end=-8)


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
