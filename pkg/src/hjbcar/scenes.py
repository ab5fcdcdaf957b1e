"""Built-in scenes.

Obstacle sizes and speeds here are reconstructions chosen to reproduce the
qualitative behaviour of the three demonstration scenarios (rotating sectors,
oscillating doorways, lane change); they are plain data and can be dumped to
JSON and edited.
"""
from __future__ import annotations

import math

from .kinematics import CarParams, Configuration
from .scene import MovingRectangle, OscillatingBar, RotatingAnnularSector, Scene, StaticDisk

DEFAULT_CAR = CarParams(d=0.07, R=0.04, W=4.0)
DOMAIN = (-1.0, 1.0, -1.0, 1.0)

BLUE_SPEED = math.pi / 5
BLACK_SPEED = 3 * BLUE_SPEED


def free_space(target=(0.5, 0.0, 0.0), horizon: float = 3.0, car: CarParams = DEFAULT_CAR) -> Scene:
    return Scene(DOMAIN, horizon, car, Configuration.make(*target), (), (), "free_space")


def rotating_sectors(horizon: float = 10.0, car: CarParams = DEFAULT_CAR) -> Scene:
    """Four annular sectors turning counterclockwise about the origin; the
    black pair (inner ring) turns three times as fast as the blue pair."""
    width = math.pi / 4
    black = [
        RotatingAnnularSector(r_in=0.35, r_out=0.5, start=s, width=width, omega=BLACK_SPEED)
        for s in (math.pi / 8, math.pi / 8 + math.pi)
    ]
    blue = [
        RotatingAnnularSector(r_in=0.5, r_out=0.65, start=s, width=width, omega=BLUE_SPEED)
        for s in (math.pi / 2 + math.pi / 8, math.pi / 2 + math.pi / 8 + math.pi)
    ]
    starts = (
        Configuration.make(-0.8, -0.8, math.pi / 4),
        Configuration.make(0.8, -0.8, 3 * math.pi / 4),
        Configuration.make(0.8, 0.8, 5 * math.pi / 4),
        Configuration.make(-0.8, 0.8, 7 * math.pi / 4),
    )
    return Scene(DOMAIN, horizon, car, Configuration.make(0.0, 0.0, math.pi), tuple(black + blue), starts,
                 "rotating_sectors")


def doors(horizon: float = 10.0, car: CarParams = DEFAULT_CAR, gap: float = 0.45) -> Scene:
    """Three vertical walls, each with a doorway that slides up and down."""
    obstacles = []
    half_x = 0.03
    long = 1.2  # each bar reaches past the domain edge at any displacement
    for x, period, phase, offset in ((-0.45, 4.0, 0.0, 0.1), (0.05, 3.0, 2.0, -0.2), (0.5, 5.0, 4.0, 0.2)):
        for side in (1, -1):
            cy = offset + side * (gap / 2 + long)
            obstacles.append(OscillatingBar(cx=x, cy=cy, half_x=half_x, half_y=long, axis=(0.0, 1.0),
                                            amplitude=0.35, period_=period, phase=phase))
    starts = (Configuration.make(-0.8, -0.8, math.pi / 2),)
    return Scene(DOMAIN, horizon, car, Configuration.make(0.8, 0.8, math.pi / 4), tuple(obstacles), starts,
                 "doors")


def lane_change(horizon: float = 3.0, car: CarParams = DEFAULT_CAR, speed: float = 0.2) -> Scene:
    """Two cars drive east in the upper lane; the planned car starts in the lower
    lane and has to merge into the gap between them."""
    lane_hi, lane_lo = 0.12, -0.12
    hl, hw = car.body_half_length, car.body_half_width

    def cruiser(x0):
        return MovingRectangle(half_length=hl, half_width=hw, heading=0.0,
                               waypoints=((0.0, x0, lane_hi), (horizon, x0 + speed * horizon, lane_hi)))

    obstacles = (cruiser(0.75), cruiser(-0.45))
    starts = (Configuration.make(-0.75, lane_lo, 0.0),)
    return Scene(DOMAIN, horizon, car, Configuration.make(0.4, lane_hi, 0.0), obstacles, starts, "lane_change")


def static_disks(horizon: float = 3.0, car: CarParams = DEFAULT_CAR) -> Scene:
    obstacles = (StaticDisk(cx=0.0, cy=0.0, radius=0.2), StaticDisk(cx=-0.45, cy=0.5, radius=0.15))
    starts = (Configuration.make(-0.6, -0.3, 0.0),)
    return Scene(DOMAIN, horizon, car, Configuration.make(0.5, 0.1, 0.0), obstacles, starts, "static_disks")


BUILTIN = {
    "free_space": free_space,
    "rotating_sectors": rotating_sectors,
    "doors": doors,
    "lane_change": lane_change,
    "static_disks": static_disks,
}
