"""Uniform discretization of the domain, heading circle and time horizon."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .kinematics import TWO_PI, CarParams, Configuration, wrap_angle


class CFLError(ValueError):
    """Raised when the time step violates the monotonicity bound."""


def cfl_rate(dx: float, dy: float, dtheta: float, car: CarParams) -> float:
    return (1.0 + car.W * car.d) / dx + (1.0 + car.W * car.d) / dy + car.W / dtheta


def cfl_max_dt(dx: float, dy: float, dtheta: float, car: CarParams) -> float:
    """Largest time step for which the explicit upwind update stays monotone."""
    if min(dx, dy, dtheta) <= 0:
        raise ValueError("grid spacings must be positive")
    return 1.0 / cfl_rate(dx, dy, dtheta, car)


class NodeIndex(NamedTuple):
    i: int
    j: int
    k: int
    n: int = 0


@dataclass(frozen=True)
class Grid4:
    """Grid over ``[x_min, x_max] x [y_min, y_max] x [0, 2pi) x [0, T]``.

    ``I`` and ``J`` count cells, so there are ``I + 1`` and ``J + 1`` nodes
    along x and y.  ``K`` counts distinct heading nodes (node ``K`` is node 0).
    ``N`` counts time steps.
    """

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    I: int
    J: int
    K: int
    N: int
    T: float

    def __post_init__(self):
        for name in ("I", "J", "K", "N"):
            val = getattr(self, name)
            if int(val) != val or val < 1:
                raise ValueError(f"{name} must be a positive integer, got {val!r}")
        if self.I < 2 or self.J < 2:
            raise ValueError("need at least one interior node per spatial axis (I, J >= 2)")
        if self.K < 3:
            raise ValueError("K must be at least 3")
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("empty spatial domain")
        if not self.T > 0:
            raise ValueError("horizon T must be positive")

    @classmethod
    def with_cfl(cls, domain, I, J, K, T, car: CarParams, safety: float = 0.9) -> "Grid4":
        """Build a grid whose time step is ``safety`` times the CFL bound, landing exactly on ``T``."""
        if not 0 < safety <= 1:
            raise ValueError("CFL safety factor must lie in (0, 1]")
        x_min, x_max, y_min, y_max = domain
        dx = (x_max - x_min) / I
        dy = (y_max - y_min) / J
        dt = safety * cfl_max_dt(dx, dy, TWO_PI / K, car)
        N = max(1, math.ceil(T / dt - 1e-12))
        return cls(x_min, x_max, y_min, y_max, int(I), int(J), int(K), N, float(T))

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.I

    @property
    def dy(self) -> float:
        return (self.y_max - self.y_min) / self.J

    @property
    def dtheta(self) -> float:
        return TWO_PI / self.K

    @property
    def dt(self) -> float:
        return self.T / self.N

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.I + 1, self.J + 1, self.K)

    @property
    def domain(self) -> tuple[float, float, float, float]:
        return (self.x_min, self.x_max, self.y_min, self.y_max)

    @property
    def xs(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.I + 1)

    @property
    def ys(self) -> np.ndarray:
        return self.y_min + self.dy * np.arange(self.J + 1)

    @property
    def thetas(self) -> np.ndarray:
        return self.dtheta * np.arange(self.K)

    def time(self, n: int) -> float:
        return n * self.dt

    def cfl_number(self, car: CarParams) -> float:
        """``dt`` times the CFL rate; the scheme is monotone iff this is <= 1."""
        return self.dt * cfl_rate(self.dx, self.dy, self.dtheta, car)

    def check_cfl(self, car: CarParams) -> None:
        bound = cfl_max_dt(self.dx, self.dy, self.dtheta, car)
        # relative slack only for round-off in dt = T/N
        if self.dt > bound * (1 + 1e-12):
            raise CFLError(f"dt={self.dt:.6g} exceeds the CFL bound {bound:.6g}")

    def contains(self, x: float, y: float) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max

    def node_to_config(self, idx) -> tuple[Configuration, float]:
        i, j, k, n = NodeIndex(*idx)
        if not (0 <= i <= self.I and 0 <= j <= self.J and 0 <= n <= self.N):
            raise IndexError(f"node {tuple(idx)} out of range")
        if not 0 <= k < self.K:
            raise IndexError(f"heading index {k} out of range [0, {self.K}); reduce modulo K")
        c = Configuration(self.x_min + i * self.dx, self.y_min + j * self.dy, k * self.dtheta)
        return c, n * self.dt

    def snap_config(self, c) -> NodeIndex:
        """Nearest node to configuration ``c``; exact midpoints go to the lower index."""
        x, y, theta = c
        if not self.contains(x, y):
            raise ValueError(f"configuration ({x}, {y}) lies outside the domain")
        i = _round_half_down((x - self.x_min) / self.dx)
        j = _round_half_down((y - self.y_min) / self.dy)
        k = _round_half_down(wrap_angle(theta) / self.dtheta) % self.K
        return NodeIndex(min(i, self.I), min(j, self.J), k, 0)

    def wrap_k(self, k):
        return np.mod(k, self.K)


def _round_half_down(s: float) -> int:
    return int(math.ceil(s - 0.5))
