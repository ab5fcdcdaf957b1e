import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hjbcar.grid import CFLError, Grid4, NodeIndex, cfl_max_dt
from hjbcar.kinematics import CarParams

CAR = CarParams(d=0.07, R=0.04, W=4.0)


def test_cfl_fine_spacing():
    # 1 / (1.28/0.02 * 2 + 4/(2pi/100)) = 1 / 191.66...
    assert cfl_max_dt(0.02, 0.02, 2 * math.pi / 100, CAR) == pytest.approx(0.0052175, rel=1e-4)


def test_cfl_point_car_unit_spacing():
    assert cfl_max_dt(1, 1, 1, CarParams(d=0, R=0, W=4)) == pytest.approx(1 / 6)


def test_cfl_halves_when_spacings_halve():
    a = cfl_max_dt(0.04, 0.04, 0.1, CAR)
    assert cfl_max_dt(0.02, 0.02, 0.05, CAR) == pytest.approx(a / 2)


def test_with_cfl_lands_on_horizon_and_respects_bound():
    g = Grid4.with_cfl((-1, 1, -1, 1), 50, 50, 64, 3.0, CAR)
    assert g.N * g.dt == pytest.approx(3.0)
    assert g.dt <= 0.9 * cfl_max_dt(g.dx, g.dy, g.dtheta, CAR) * (1 + 1e-12)
    assert g.shape == (51, 51, 64)


def test_check_cfl_rejects_large_step():
    g = Grid4(-1, 1, -1, 1, 50, 50, 64, 10, 3.0)
    with pytest.raises(CFLError):
        g.check_cfl(CAR)


@pytest.mark.parametrize("kw", [dict(I=0), dict(J=1), dict(K=2), dict(N=0), dict(T=-1.0), dict(I=2.5)])
def test_grid_validation(kw):
    args = dict(x_min=-1, x_max=1, y_min=-1, y_max=1, I=10, J=10, K=8, N=10, T=1.0)
    args.update(kw)
    with pytest.raises(ValueError):
        Grid4(**args)


def test_node_to_config_corners():
    g = Grid4(-1, 1, -1, 1, 50, 50, 64, 100, 3.0)
    c, t = g.node_to_config((0, 0, 0, 0))
    assert tuple(c) == (-1.0, -1.0, 0.0) and t == 0.0
    c, t = g.node_to_config((50, 50, 63, 100))
    assert c.x == pytest.approx(1.0) and c.y == pytest.approx(1.0)
    assert c.theta == pytest.approx(2 * math.pi * 63 / 64)
    assert t == pytest.approx(3.0)
    with pytest.raises(IndexError):
        g.node_to_config((0, 0, 64, 0))
    with pytest.raises(IndexError):
        g.node_to_config((51, 0, 0, 0))


def test_snap_examples():
    g = Grid4(-1, 1, -1, 1, 50, 50, 64, 100, 3.0)
    c, _ = g.node_to_config((7, 9, 5))
    assert g.snap_config(c)[:3] == (7, 9, 5)
    assert g.snap_config((0.0, 0.0, 2 * math.pi - g.dtheta / 4)).k == 0
    # halfway between nodes 12 and 13 goes to the lower index
    assert g.snap_config((-1 + 12.5 * g.dx, 0.0, 0.0)).i == 12
    assert g.snap_config((0.0, 0.0, 2.5 * g.dtheta)).k == 2
    with pytest.raises(ValueError):
        g.snap_config((1.5, 0.0, 0.0))


@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-10, 10))
def test_snap_within_half_spacing(x, y, th):
    g = Grid4(-1, 1, -1, 1, 20, 30, 16, 10, 1.0)
    idx = g.snap_config((x, y, th))
    c, _ = g.node_to_config(idx)
    assert abs(c.x - x) <= g.dx / 2 + 1e-12
    assert abs(c.y - y) <= g.dy / 2 + 1e-12
    gap = abs((c.theta - th + math.pi) % (2 * math.pi) - math.pi)
    assert gap <= g.dtheta / 2 + 1e-9


def test_node_index_default_time():
    assert NodeIndex(1, 2, 3).n == 0
