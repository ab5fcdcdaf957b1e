"""Off-grid interpolation of the value function and semi-Lagrangian path extraction."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .kinematics import CONTROL_PAIRS, TWO_PI, CarParams, Configuration, controls_from_gradient, motion, wrap_angle
from .scene import DEFAULT_SPACING, Scene, collides, collides_many


class TraceError(ValueError):
    """The start configuration is illegal or cannot reach the target."""


def interpolate(vf, x, y, theta, t):
    """Quadrilinear interpolation of the value function, periodic in heading.

    Any stencil vertex that carries weight and holds the sentinel makes the
    result the sentinel.  Accepts scalars or broadcastable arrays.
    """
    g = vf.grid
    x, y, theta = np.broadcast_arrays(
        np.asarray(x, dtype=float), np.asarray(y, dtype=float), np.asarray(theta, dtype=float)
    )
    scalar = x.ndim == 0
    x, y, theta = np.atleast_1d(x), np.atleast_1d(y), np.atleast_1d(theta)
    eps = 1e-9
    if (np.any(x < g.x_min - eps) or np.any(x > g.x_max + eps) or np.any(y < g.y_min - eps)
            or np.any(y > g.y_max + eps)):
        raise ValueError("interpolation query outside the spatial domain")
    if not -eps <= t <= g.T + eps:
        raise ValueError(f"interpolation time {t} outside [0, {g.T}]")

    times = vf.times
    s1 = int(np.searchsorted(times, t - eps))
    s1 = min(max(s1, 0), len(times) - 1)
    if abs(times[s1] - t) <= eps or s1 == 0:
        parts = [(s1, 1.0)]
    else:
        s0 = s1 - 1
        wt = (t - times[s0]) / (times[s1] - times[s0])
        parts = [(s0, 1.0 - wt), (s1, wt)]

    fx = np.clip((x - g.x_min) / g.dx, 0.0, g.I)
    fy = np.clip((y - g.y_min) / g.dy, 0.0, g.J)
    ft = wrap_angle(theta) / g.dtheta
    i0 = np.minimum(np.floor(fx).astype(int), g.I - 1)
    j0 = np.minimum(np.floor(fy).astype(int), g.J - 1)
    k0 = np.floor(ft).astype(int) % g.K
    wx = fx - i0
    wy = fy - j0
    wk = ft - np.floor(ft)
    k1 = (k0 + 1) % g.K

    M = vf.sentinel
    M32 = float(np.float32(M))
    total = np.zeros(x.shape)
    absorbed = np.zeros(x.shape, dtype=bool)
    for s, ws in parts:
        if ws == 0.0:
            continue
        sl = vf.slices[s]
        for di, wi in ((0, 1.0 - wx), (1, wx)):
            for dj, wj in ((0, 1.0 - wy), (1, wy)):
                for kk, wkk in ((k0, 1.0 - wk), (k1, wk)):
                    w = ws * wi * wj * wkk
                    val = sl[i0 + di, j0 + dj, kk].astype(float)
                    absorbed |= (w > 0) & (val >= M32)
                    total += w * val
    out = np.where(absorbed, M, total)
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class TracerParams:
    delta: float | None = None  # defaults to the stored-slice interval
    pos_tol: float | None = None  # defaults to 1.5 max(dx, dy)
    angle_tol: float | None = None  # defaults to 1.5 dtheta
    max_steps: int | None = None  # defaults to the number of steps that fit in T
    lookahead: bool = False  # True: evaluate candidates at the time they are reached

    def resolve(self, vf) -> "TracerParams":
        g = vf.grid
        delta = self.delta if self.delta is not None else vf.stored_dt
        if not delta > 0:
            raise ValueError("tracer time step must be positive")
        pos_tol = self.pos_tol if self.pos_tol is not None else 1.5 * max(g.dx, g.dy)
        angle_tol = self.angle_tol if self.angle_tol is not None else 1.5 * g.dtheta
        if not (pos_tol > 0 and angle_tol > 0):
            raise ValueError("tolerances must be positive")
        max_steps = self.max_steps if self.max_steps is not None else int(math.floor(g.T / delta + 1e-9))
        return TracerParams(delta, pos_tol, angle_tol, max_steps, self.lookahead)


@dataclass
class Trajectory:
    """Samples ``(t, x, y, theta, v, w)``; row ``l`` holds the state at ``t_l`` and the
    controls applied on ``[t_l, t_{l+1}]``.  The last row carries ``v = w = 0``."""

    samples: np.ndarray
    start: Configuration
    arrival_time: float | None
    delta: float
    values: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def arrived(self) -> bool:
        return self.arrival_time is not None

    @property
    def steps(self) -> int:
        return len(self.samples) - 1

    @property
    def duration(self) -> float:
        return float(self.samples[-1, 0] - self.samples[0, 0])

    @property
    def controls(self) -> list[tuple[int, int]]:
        return [(int(v), int(w)) for v, w in self.samples[:-1, 4:6]]

    def longest_wait(self) -> int:
        best = run = 0
        for v, w in self.controls:
            run = run + 1 if v == 0 and w == 0 else 0
            best = max(best, run)
        return best

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "x", "y", "theta", "v", "w"])
            for row in self.samples:
                writer.writerow([f"{val:.9g}" for val in row[:4]] + [int(row[4]), int(row[5])])


def read_trajectory_csv(path, delta: float | None = None) -> Trajectory:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    start = Configuration.make(*data[0, 1:4])
    if delta is None:
        delta = float(data[1, 0] - data[0, 0]) if len(data) > 1 else 0.0
    return Trajectory(data, start, None, delta)


def _angle_gap(a, b):
    d = np.mod(np.asarray(a) - b, TWO_PI)
    return np.minimum(d, TWO_PI - d)


def at_target(state, target, pos_tol: float, angle_tol: float) -> bool:
    x, y, th = state
    return math.hypot(x - target[0], y - target[1]) <= pos_tol and _angle_gap(th, target[2]) <= angle_tol


def _euler(state, pair, delta, car):
    vx, vy, vt = motion(state, pair, car)
    return (state[0] + delta * vx, state[1] + delta * vy, wrap_angle(state[2] + delta * vt))


def trace(vf, start, scene: Scene, car: CarParams | None = None, params: TracerParams | None = None,
          target=None) -> Trajectory:
    """Steer from ``start`` at ``t = 0`` by greedily minimizing the interpolated travel time."""
    car = car or vf.car
    p = (params or TracerParams()).resolve(vf)
    g = vf.grid
    target = scene.target if target is None else target
    start = Configuration.make(*start)
    if not g.contains(start.x, start.y):
        raise TraceError("start outside the domain")
    if collides(start, 0.0, scene, car, min(g.dx, g.dy) / 2):
        raise TraceError("start configuration collides with an obstacle at t = 0")
    u0 = interpolate(vf, start.x, start.y, start.theta, 0.0)
    if at_target(start, target, p.pos_tol, p.angle_tol):
        return Trajectory(np.array([[0.0, *start, 0, 0]]), start, 0.0, p.delta, np.array([u0]))
    if u0 >= g.T:
        raise TraceError(f"start cannot reach the target within the horizon (value {u0:.4g})")

    M = vf.sentinel
    rows = []
    values = [u0]
    state = tuple(start)
    arrival = None
    xs_lo, xs_hi, ys_lo, ys_hi = g.domain
    for ell in range(p.max_steps + 1):
        t = ell * p.delta
        if at_target(state, target, p.pos_tol, p.angle_tol):
            arrival = t
            break
        if ell == p.max_steps:
            break
        t_eval = min((ell + 1) * p.delta, g.T) if p.lookahead else t
        cands = [_euler(state, pair, p.delta, car) for pair in CONTROL_PAIRS]
        cx = np.array([c[0] for c in cands])
        cy = np.array([c[1] for c in cands])
        ct = np.array([c[2] for c in cands])
        inside = (cx >= xs_lo) & (cx <= xs_hi) & (cy >= ys_lo) & (cy <= ys_hi)
        vals = np.full(len(cands), M)
        if inside.any():
            vals[inside] = interpolate(vf, cx[inside], cy[inside], ct[inside], t_eval)
        best = int(np.argmin(vals))
        pair = CONTROL_PAIRS[best]
        rows.append([t, *state, pair.v, pair.w])
        state = cands[best]
        values.append(float(vals[best]))
    t_end = len(rows) * p.delta
    rows.append([t_end, *state, 0, 0])
    return Trajectory(np.array(rows, dtype=float), start, arrival, p.delta, np.array(values))


@dataclass
class ValidationReport:
    passed: bool
    violation: str | None = None
    step: int | None = None
    time: float | None = None

    def to_dict(self):
        return {"passed": self.passed, "violation": self.violation, "step": self.step, "time": self.time}


def validate_trajectory(tr: Trajectory, scene: Scene, car: CarParams, oversample: int = 10,
                        spacing: float = DEFAULT_SPACING, atol: float = 1e-7) -> ValidationReport:
    """Check Euler consistency, the turn-rate bound and collision freedom between samples.

    Collisions are checked at ``oversample`` points per interval by linear
    interpolation of the state along each step.
    """
    s = tr.samples
    x_min, x_max, y_min, y_max = scene.domain
    for ell in range(len(s) - 1):
        t0, x0, y0, th0, v, w = s[ell]
        t1, x1, y1, th1 = s[ell + 1, :4]
        h = t1 - t0
        if not h > 0:
            return ValidationReport(False, "non-increasing sample times", ell, float(t0))
        if (int(v), int(w)) not in CONTROL_PAIRS:
            return ValidationReport(False, f"inadmissible controls ({v}, {w})", ell, float(t0))
        if _angle_gap(th1, th0) > car.W * h * (1 + 1e-9) + atol:
            return ValidationReport(False, "turn rate exceeds W", ell, float(t0))
        ex, ey, et = _euler((x0, y0, th0), (v, w), h, car)
        if abs(ex - x1) > atol or abs(ey - y1) > atol or _angle_gap(et, th1) > atol:
            return ValidationReport(False, "sample does not follow the Euler step", ell, float(t0))
    for ell in range(len(s) - 1):
        t0, x0, y0, th0, v, w = s[ell]
        h = s[ell + 1, 0] - t0
        vx, vy, vt = motion((x0, y0, th0), (v, w), car)
        fracs = np.arange(oversample) / oversample
        for f in fracs:
            tt = min(t0 + f * h, scene.horizon)
            px, py, pt = x0 + f * h * vx, y0 + f * h * vy, th0 + f * h * vt
            if not (x_min <= px <= x_max and y_min <= py <= y_max):
                return ValidationReport(False, "car leaves the domain", ell, float(tt))
            if collides((px, py, pt), tt, scene, car, spacing):
                return ValidationReport(False, "collision with an obstacle", ell, float(tt))
    t_last, xl, yl, thl = s[-1, :4]
    if collides((xl, yl, thl), min(t_last, scene.horizon), scene, car, spacing):
        return ValidationReport(False, "collision with an obstacle", len(s) - 1, float(t_last))
    return ValidationReport(True)


def gradient_control_agreement(vf, states, t: float, car: CarParams | None = None,
                               delta: float | None = None) -> dict:
    """Compare sign-formula controls from a finite-difference gradient with the
    semi-Lagrangian argmin at the given states.  Diagnostic only.
    """
    car = car or vf.car
    g = vf.grid
    delta = delta or vf.stored_dt
    hx, hy, ht = g.dx, g.dy, g.dtheta
    compared = mismatched = inadmissible = 0
    for x, y, th in states:
        if not (g.x_min + 2 * hx <= x <= g.x_max - 2 * hx and g.y_min + 2 * hy <= y <= g.y_max - 2 * hy):
            continue
        xs = np.array([x + hx, x - hx, x, x, x, x, x])
        ys = np.array([y, y, y + hy, y - hy, y, y, y])
        ts = np.array([th, th, th, th, th + ht, th - ht, th])
        vals = interpolate(vf, xs, ys, ts, t)
        if np.any(vals >= vf.sentinel) or vals[-1] >= g.T:
            continue
        grad = ((vals[0] - vals[1]) / (2 * hx), (vals[2] - vals[3]) / (2 * hy), (vals[4] - vals[5]) / (2 * ht))
        gc = controls_from_gradient(grad, th, car)
        cands = [_euler((x, y, th), pair, delta, car) for pair in CONTROL_PAIRS]
        cv = interpolate(vf, [c[0] for c in cands], [c[1] for c in cands], [c[2] for c in cands],
                         min(t + delta, g.T))
        sl = CONTROL_PAIRS[int(np.argmin(cv))]
        compared += 1
        inadmissible += not gc.admissible
        mismatched += (gc.v, gc.w) != (sl.v, sl.w)
    return {
        "compared": compared,
        "mismatch_rate": mismatched / compared if compared else float("nan"),
        "inadmissible_rate": inadmissible / compared if compared else float("nan"),
    }
