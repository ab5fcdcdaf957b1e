import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hjbcar.kinematics import (
    CONTROL_PAIRS,
    CarParams,
    Configuration,
    ControlPair,
    controls_from_gradient,
    motion,
    upwind_coeffs,
    wrap_angle,
)

CAR = CarParams(d=0.07, R=0.04, W=4.0)
angles = st.floats(0, 2 * math.pi, allow_nan=False, exclude_max=True)


def test_control_set_order_and_admissibility():
    assert CONTROL_PAIRS == ((0, 0), (1, 0), (-1, 0), (1, 1), (1, -1), (-1, 1), (-1, -1))
    assert all(p.admissible for p in CONTROL_PAIRS)
    assert not ControlPair(0, 1).admissible
    assert not ControlPair(0, -1).admissible


def test_car_params_validation():
    with pytest.raises(ValueError):
        CarParams(W=0)
    with pytest.raises(ValueError):
        CarParams(d=-0.1)
    with pytest.raises(ValueError):
        CarParams(d=0.07, body_half_length=0.05)
    assert CarParams(d=0.07, R=0.04).body_half_length == 0.07


def test_motion_straight():
    assert motion((0, 0, 0), (1, 0), CAR) == pytest.approx((1.0, 0.0, 0.0))


def test_motion_turning_at_half_pi():
    # cos(pi/2) - W d * sin(pi/2) = -0.28; sin(pi/2) + W d cos(pi/2) = 1
    assert motion((0, 0, math.pi / 2), (1, 1), CAR) == pytest.approx((-0.28, 1.0, 4.0), abs=1e-12)


def test_motion_zero_controls():
    assert motion((0.3, -0.2, 1.0), (0, 0), CAR) == (0.0, 0.0, 0.0)


def test_upwind_coeffs_example():
    A, a, B, b = upwind_coeffs(math.pi / 2, (1, 1), CAR)
    assert A == pytest.approx(-0.28)
    assert (a, b) == (-1, 1)
    assert B == pytest.approx(1.0)


@pytest.mark.parametrize(
    "grad, theta, expected",
    [
        ((1, 0, 0), 0.0, (-1, 0, True)),
        ((0, 0, -2), 0.0, (0, 1, False)),
        ((-1, -1, 0), math.pi / 4, (1, 0, True)),
    ],
)
def test_controls_from_gradient(grad, theta, expected):
    gc = controls_from_gradient(grad, theta, CAR)
    assert (gc.v, gc.w, gc.admissible) == expected


def test_wrap_angle():
    assert wrap_angle(2 * math.pi) == 0.0
    assert wrap_angle(-math.pi / 2) == pytest.approx(1.5 * math.pi)
    assert Configuration.make(0, 0, 7.0).theta == pytest.approx(7.0 - 2 * math.pi)


@given(angles, st.sampled_from(CONTROL_PAIRS))
def test_nonholonomic_constraint(theta, pair):
    # lateral velocity of the center of mass equals d * theta'
    xd, yd, td = motion((0.0, 0.0, theta), pair, CAR)
    assert yd * math.cos(theta) - xd * math.sin(theta) == pytest.approx(CAR.d * td, abs=1e-12)


@given(angles, st.sampled_from(CONTROL_PAIRS))
def test_upwind_coeffs_match_motion_and_bounds(theta, pair):
    A, a, B, b = upwind_coeffs(theta, pair, CAR)
    xd, yd, _ = motion((0.0, 0.0, theta), pair, CAR)
    assert (A, B) == (xd, yd)
    assert abs(A) <= 1 + CAR.W * CAR.d and abs(B) <= 1 + CAR.W * CAR.d
    assert a == np.sign(A) and b == np.sign(B)
    assert (a == 0) == (A == 0)
