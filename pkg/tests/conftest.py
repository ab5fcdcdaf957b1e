import numpy as np
import pytest

from hjbcar import scenes
from hjbcar.grid import Grid4
from hjbcar.kinematics import CarParams

CAR = CarParams(d=0.07, R=0.04, W=4.0)


@pytest.fixture
def car():
    return CAR


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def coarse_free():
    """Free-space solve on a small grid, shared across modules."""
    from hjbcar.solver import Solver

    sc = scenes.free_space(horizon=2.0)
    g = Grid4.with_cfl(sc.domain, 25, 25, 32, sc.horizon, sc.car)
    return sc, Solver(sc, g).solve()


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
