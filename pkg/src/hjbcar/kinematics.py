"""Car model, control set and equations of motion.

The state of the car is the position of its center of mass and its heading
``(x, y, theta)``.  Controls are the tangential speed ``v`` and the turn rate
``w``, both normalized to ``[-1, 1]``; the physical turn rate is ``w * W``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CarParams:
    """Vehicle geometry and angular velocity bound.

    ``d`` is the distance from the rear axle to the center of mass, ``R`` half
    the rear axle width and ``W`` the maximum angular velocity.  The body is a
    rectangle centered on the center of mass; by default its half-length is
    ``d`` and its half-width is ``R``.
    """

    d: float = 0.07
    R: float = 0.04
    W: float = 4.0
    body_half_length: float | None = None
    body_half_width: float | None = None

    def __post_init__(self):
        if self.body_half_length is None:
            object.__setattr__(self, "body_half_length", float(self.d))
        if self.body_half_width is None:
            object.__setattr__(self, "body_half_width", float(self.R))
        if self.d < 0 or self.R < 0:
            raise ValueError(f"d and R must be non-negative, got d={self.d}, R={self.R}")
        if not self.W > 0:
            raise ValueError(f"W must be positive, got {self.W}")
        if self.body_half_length < self.d or self.body_half_width < self.R:
            raise ValueError(
                "body rectangle must contain the rear axle and the center of mass "
                f"(half_length={self.body_half_length} < d={self.d} "
                f"or half_width={self.body_half_width} < R={self.R})"
            )

    @property
    def max_speed_component(self) -> float:
        """Upper bound on ``|x'|`` and ``|y'|`` over all controls."""
        return 1.0 + self.W * self.d


class ControlPair(NamedTuple):
    v: int
    w: int

    @property
    def admissible(self) -> bool:
        return self.v in (-1, 0, 1) and self.w in (-1, 0, 1) and not (self.v == 0 and self.w != 0)


# Fixed enumeration order; argmin ties go to the earliest pair.
CONTROL_PAIRS: tuple[ControlPair, ...] = (
    ControlPair(0, 0),
    ControlPair(1, 0),
    ControlPair(-1, 0),
    ControlPair(1, 1),
    ControlPair(1, -1),
    ControlPair(-1, 1),
    ControlPair(-1, -1),
)
WAIT = CONTROL_PAIRS[0]


def wrap_angle(theta):
    """Wrap an angle (scalar or array) into ``[0, 2*pi)``."""
    out = np.mod(theta, TWO_PI)
    # np.mod can return exactly 2*pi for tiny negative inputs
    out = np.where(out >= TWO_PI, 0.0, out)
    if np.ndim(out) == 0:
        return float(out)
    return out


class Configuration(NamedTuple):
    x: float
    y: float
    theta: float

    @classmethod
    def make(cls, x, y, theta) -> "Configuration":
        return cls(float(x), float(y), wrap_angle(theta))


def motion(c, u, car: CarParams):
    """Velocity ``(x', y', theta')`` of the car at configuration ``c`` under controls ``u``.

    Works elementwise when the entries of ``c`` or ``u`` are arrays.
    """
    x, y, theta = c
    v, w = u
    wWd = w * car.W * car.d
    cos_t = np.cos(theta)
    sin_t = np.sin(theta)
    return (v * cos_t - wWd * sin_t, v * sin_t + wWd * cos_t, w * car.W)


def upwind_coeffs(theta_k, u, car: CarParams):
    """Return ``(A, a, B, b)``: the x/y transport speeds and their signs at heading ``theta_k``."""
    A, B, _ = motion((0.0, 0.0, theta_k), u, car)
    return A, np.sign(A), B, np.sign(B)


class GradientControls(NamedTuple):
    v: int
    w: int
    admissible: bool


def _sign(value: float, scale: float, rtol: float = 1e-12) -> int:
    # cancellation residue such as sin(pi/4) - cos(pi/4) counts as zero
    if abs(value) <= rtol * scale:
        return 0
    return 1 if value > 0 else -1


def controls_from_gradient(grad, theta, car: CarParams) -> GradientControls:
    """Bang-bang controls read off the sign pattern of the value gradient.

    The pair ``(0, +-1)`` can come out of the sign formulas even though the
    car cannot turn in place; it is returned with ``admissible=False``.
    """
    ux, uy, uth = grad
    s = math.sin(theta)
    c = math.cos(theta)
    v = -_sign(ux * c + uy * s, abs(ux) + abs(uy))
    w = -_sign(-car.d * s * ux + car.d * c * uy + uth, car.d * (abs(ux) + abs(uy)) + abs(uth))
    return GradientControls(v, w, not (v == 0 and w != 0))
