import math

import numpy as np
import pytest

from hjbcar import checks, scenes
from hjbcar.grid import Grid4


def test_arrival_slack():
    assert checks.arrival_slack(0.06, 0.15, scenes.DEFAULT_CAR) == pytest.approx(0.06 + 0.15 / 4)


def test_random_legal_starts_are_legal(rng):
    sc = scenes.static_disks()
    g = Grid4.with_cfl(sc.domain, 20, 20, 16, sc.horizon, sc.car)
    starts = checks.random_legal_starts(sc, g, 10, rng)
    from hjbcar.scene import collides

    assert len(starts) == 10
    assert not any(collides(c, 0.0, sc, sc.car) for c in starts)


def test_oracle_dominance_aligned_start(coarse_free):
    sc, vf = coarse_free
    rep = checks.oracle_dominance(vf, sc, [(-0.5, 0.0, 0.0), (-0.2, 0.0, 0.0)], depth=1)
    assert rep["found"] == 2 and rep["passed"], rep


@pytest.mark.xfail(strict=True, reason="first-order upwind values overestimate off-axis travel times "
                                        "by more than the oracle slack at this resolution")
def test_oracle_dominance_off_axis(coarse_free):
    sc, vf = coarse_free
    rep = checks.oracle_dominance(vf, sc, [(0.0, -0.4, math.pi / 2)], depth=2,
                                  durations=np.linspace(0, 1.2, 25))
    assert rep["upper_violations"] == 0


def test_lower_bound_always_holds_off_axis(coarse_free):
    sc, vf = coarse_free
    rep = checks.oracle_dominance(vf, sc, [(0.0, -0.4, math.pi / 2), (-0.6, 0.5, 4.0)], depth=1)
    assert rep["lower_violations"] == 0


def test_masks_equal_detects_motion():
    sc = scenes.rotating_sectors()
    g = Grid4.with_cfl(sc.domain, 16, 16, 8, sc.horizon, sc.car)
    assert checks.masks_equal(sc, g, sc.car, 0.0, 10.0)
    assert not checks.masks_equal(sc, g, sc.car, 0.0, 1.0)
