"""Backward-in-time upwind integration of the travel-time HJB equation.

Values are remaining travel times to the target.  The terminal slice is zero
at the target node and the sentinel ``M`` elsewhere; each backward step takes
the explicit upwind update minimized over the seven control pairs and keeps
it only where it beats ``M``.  Obstacle nodes and the spatial boundary are
pinned to ``M``, the target node to zero.
"""
from __future__ import annotations

import logging
import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .grid import CFLError, Grid4, NodeIndex
from .kinematics import CONTROL_PAIRS, CarParams, ControlPair
from .scene import Scene, collides, illegal_mask

log = logging.getLogger(__name__)


class TargetError(ValueError):
    """The target configuration is outside the domain or blocked at the horizon."""


@dataclass(frozen=True)
class SolverParams:
    sentinel: float | None = None  # defaults to 2 T
    cfl_safety: float = 0.9
    stride: int | None = None  # defaults to the smallest stride that fits memory_budget
    memory_budget: float = 1e9  # bytes for stored slices

    def __post_init__(self):
        if not 0 < self.cfl_safety <= 1:
            raise ValueError("cfl_safety must lie in (0, 1]")
        if self.stride is not None and self.stride < 1:
            raise ValueError("stride must be >= 1")

    def sentinel_for(self, T: float) -> float:
        M = 2.0 * T if self.sentinel is None else float(self.sentinel)
        if M < 2 * T:
            raise ValueError(f"sentinel {M} must be at least 2T = {2 * T}")
        return M


@dataclass(frozen=True)
class UpwindTable:
    """Per-pair, per-heading stencil weights (rates of each one-sided difference)."""

    x_plus: np.ndarray  # (7, K): max(A, 0) / dx
    x_minus: np.ndarray
    y_plus: np.ndarray
    y_minus: np.ndarray
    th_plus: np.ndarray  # (7,): W / dtheta if w > 0
    th_minus: np.ndarray

    @classmethod
    def build(cls, grid: Grid4, car: CarParams) -> "UpwindTable":
        th = grid.thetas
        xp, xm, yp, ym, tp, tm = [], [], [], [], [], []
        for v, w in CONTROL_PAIRS:
            # same expressions as kinematics.motion, evaluated on the heading nodes
            A = v * np.cos(th) - w * car.W * car.d * np.sin(th)
            B = v * np.sin(th) + w * car.W * car.d * np.cos(th)
            xp.append(np.maximum(A, 0.0) / grid.dx)
            xm.append(np.maximum(-A, 0.0) / grid.dx)
            yp.append(np.maximum(B, 0.0) / grid.dy)
            ym.append(np.maximum(-B, 0.0) / grid.dy)
            tp.append(car.W / grid.dtheta if w > 0 else 0.0)
            tm.append(car.W / grid.dtheta if w < 0 else 0.0)
        return cls(*(np.array(a) for a in (xp, xm, yp, ym, tp, tm)))


def _pair_terms(next_slice: np.ndarray, table: UpwindTable):
    """Yield ``(pair_index, min-term)`` for every control pair over the interior nodes."""
    c = next_slice[1:-1, 1:-1, :]
    dxp = next_slice[2:, 1:-1, :] - c
    dxm = next_slice[:-2, 1:-1, :] - c
    dyp = next_slice[1:-1, 2:, :] - c
    dym = next_slice[1:-1, :-2, :] - c
    dtp = np.roll(c, -1, axis=2) - c
    dtm = np.roll(c, 1, axis=2) - c
    for p in range(len(CONTROL_PAIRS)):
        term = table.x_plus[p] * dxp
        term += table.x_minus[p] * dxm
        term += table.y_plus[p] * dyp
        term += table.y_minus[p] * dym
        if table.th_plus[p]:
            term += table.th_plus[p] * dtp
        if table.th_minus[p]:
            term += table.th_minus[p] * dtm
        yield p, term


def step_backward(next_slice, mask, grid: Grid4, car: CarParams, target: NodeIndex, sentinel: float,
                  table: UpwindTable | None = None) -> np.ndarray:
    """One backward Euler step from the slice at ``t_{n+1}`` to the slice at ``t_n``.

    ``mask`` marks illegal nodes at ``t_n`` (or is None).
    """
    if table is None:
        grid.check_cfl(car)
        table = UpwindTable.build(grid, car)
    next_slice = np.asarray(next_slice, dtype=np.float64)
    best = None
    for _, term in _pair_terms(next_slice, table):
        best = term if best is None else np.minimum(best, term, out=best)
    cand = next_slice[1:-1, 1:-1, :] + grid.dt * (1.0 + best)
    out = np.full(next_slice.shape, sentinel, dtype=np.float64)
    out[1:-1, 1:-1, :] = np.clip(cand, 0.0, sentinel)
    if mask is not None:
        out[mask] = sentinel
    out[target.i, target.j, target.k] = 0.0
    return out


def argmin_controls(next_slice, node, grid: Grid4, car: CarParams) -> ControlPair:
    """Minimizing control pair of the upwind update at an interior node (ties: first pair)."""
    i, j, k = node[0], node[1], node[2]
    if not (0 < i < grid.I and 0 < j < grid.J):
        raise IndexError("argmin_controls needs an interior node")
    table = UpwindTable.build(grid, car)
    u = np.asarray(next_slice, dtype=np.float64)
    c = u[i, j, k]
    diffs = (
        u[i + 1, j, k] - c,
        u[i - 1, j, k] - c,
        u[i, j + 1, k] - c,
        u[i, j - 1, k] - c,
        u[i, j, (k + 1) % grid.K] - c,
        u[i, j, (k - 1) % grid.K] - c,
    )
    vals = [
        table.x_plus[p, k] * diffs[0]
        + table.x_minus[p, k] * diffs[1]
        + table.y_plus[p, k] * diffs[2]
        + table.y_minus[p, k] * diffs[3]
        + table.th_plus[p] * diffs[4]
        + table.th_minus[p] * diffs[5]
        for p in range(len(CONTROL_PAIRS))
    ]
    return CONTROL_PAIRS[int(np.argmin(vals))]


def target_node(grid: Grid4, target) -> NodeIndex:
    if not grid.contains(target[0], target[1]):
        raise TargetError(f"target ({target[0]}, {target[1]}) outside the domain")
    idx = grid.snap_config(target)
    if idx.i in (0, grid.I) or idx.j in (0, grid.J):
        raise TargetError("target snaps to a boundary node")
    return idx


def terminal_slice(grid: Grid4, target, sentinel: float, scene: Scene | None = None,
                   car: CarParams | None = None) -> np.ndarray:
    """Zero at the target node, sentinel elsewhere.  Rejects a target blocked at ``t = T``."""
    idx = target_node(grid, target)
    if scene is not None:
        node_cfg, _ = grid.node_to_config(idx)
        if collides(node_cfg, min(grid.T, scene.horizon), scene, car or scene.car, min(grid.dx, grid.dy) / 2):
            raise TargetError("target configuration collides with an obstacle at the horizon")
    out = np.full(grid.shape, sentinel, dtype=np.float64)
    out[idx.i, idx.j, idx.k] = 0.0
    return out


@dataclass
class ValueFunction:
    """Travel time on stored slices ``n in steps`` (always including 0 and N)."""

    grid: Grid4
    car: CarParams
    slices: np.ndarray  # (n_stored, I+1, J+1, K) float32
    steps: np.ndarray  # (n_stored,) increasing time indices
    sentinel: float
    target: NodeIndex
    stride: int
    info: dict = field(default_factory=dict)

    @property
    def times(self) -> np.ndarray:
        return self.steps * self.grid.dt

    @property
    def stored_dt(self) -> float:
        return self.stride * self.grid.dt

    def slice_at_step(self, n: int) -> np.ndarray:
        pos = np.searchsorted(self.steps, n)
        if pos >= len(self.steps) or self.steps[pos] != n:
            raise KeyError(f"time index {n} is not stored (stride {self.stride})")
        return self.slices[pos]

    def initial(self) -> np.ndarray:
        return self.slices[0]

    def reachable_fraction(self, horizon: float | None = None) -> float:
        """Fraction of interior nodes whose time-0 value is below the horizon."""
        T = self.grid.T if horizon is None else horizon
        inner = self.slices[0][1:-1, 1:-1, :]
        return float(np.mean(inner < T))

    def interpolate(self, x, y, theta, t):
        from .tracer import interpolate

        return interpolate(self, x, y, theta, t)


def choose_stride(grid: Grid4, budget: float) -> int:
    per_slice = 4.0 * np.prod(grid.shape)
    return max(1, math.ceil((grid.N + 1) * per_slice / budget))


class Solver:
    """Validated solver setup; raises ``CFLError`` for a time step above the monotonicity bound."""

    def __init__(self, scene: Scene, grid: Grid4, params: SolverParams | None = None, car: CarParams | None = None):
        self.scene = scene
        self.car = car or scene.car
        self.grid = grid
        self.params = params or SolverParams()
        grid.check_cfl(self.car)
        if grid.T > scene.horizon + 1e-12:
            raise ValueError("grid horizon exceeds the scene horizon")
        self.sentinel = self.params.sentinel_for(grid.T)
        self.stride = self.params.stride or choose_stride(grid, self.params.memory_budget)
        self.table = UpwindTable.build(grid, self.car)

    def mask(self, n: int) -> np.ndarray:
        return illegal_mask(self.scene, self.grid, n, self.car)

    def solve(self, target=None, progress=None) -> ValueFunction:
        g = self.grid
        target = self.scene.target if target is None else target
        M = self.sentinel
        tgt = target_node(g, target)
        t0 = time.perf_counter()
        u = terminal_slice(g, target, M, self.scene, self.car)
        steps = sorted(set(range(0, g.N + 1, self.stride)) | {g.N})
        slot = {n: s for s, n in enumerate(steps)}
        store = np.empty((len(steps),) + g.shape, dtype=np.float32)
        store[slot[g.N]] = u
        static_mask = self.mask(0) if self.scene.is_static else None
        blocked_steps = []
        for n in range(g.N - 1, -1, -1):
            mask = static_mask if static_mask is not None else self.mask(n)
            if mask[tgt.i, tgt.j, tgt.k]:
                blocked_steps.append(n)
            u = step_backward(u, mask, g, self.car, tgt, M, self.table)
            if n in slot:
                store[slot[n]] = u
            if progress is not None:
                progress(n)
        if blocked_steps:
            warnings.warn(
                f"target node is covered by an obstacle at {len(blocked_steps)} time steps; "
                "it was held at zero anyway",
                RuntimeWarning,
                stacklevel=2,
            )
        vf = ValueFunction(g, self.car, store, np.array(steps), M, tgt, self.stride)
        vf.info = {
            "wall_time": time.perf_counter() - t0,
            "reachable_fraction": vf.reachable_fraction(),
            "target_blocked_steps": len(blocked_steps),
        }
        log.info("solved %d steps in %.2fs, reachable fraction %.3f", g.N, vf.info["wall_time"],
                 vf.info["reachable_fraction"])
        return vf


def solve(scene: Scene, grid: Grid4, params: SolverParams | None = None, target=None) -> ValueFunction:
    return Solver(scene, grid, params).solve(target)
