"""Brute-force upper bounds on the travel time by forward shooting.

``shoot`` enumerates every bang-bang schedule of up to ``depth`` segments
whose leading segments take durations from a grid and whose last segment
runs for as long as needed.  Constant-control segments are propagated in
closed form to rank candidates; every reported arrival is confirmed by
``simulate`` (fixed-step RK4 with collision checks), so the best time
always belongs to an admissible simulated trajectory.  No optimality is
claimed.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .kinematics import CONTROL_PAIRS, TWO_PI, CarParams, ControlPair, Configuration, motion, wrap_angle
from .scene import DEFAULT_SPACING, Scene, collides


@dataclass(frozen=True)
class Segment:
    pair: ControlPair
    duration: float


Schedule = tuple  # of Segment


def make_schedule(*segments) -> tuple[Segment, ...]:
    return tuple(Segment(ControlPair(*p), float(d)) for p, d in segments)


@dataclass
class SimResult:
    status: str  # "arrived", "collision", "left_domain" or "not_arrived"
    time: float
    state: tuple[float, float, float]

    @property
    def arrived(self) -> bool:
        return self.status == "arrived"


def _rk4(state, pair, car, h):
    def f(s):
        return np.array(motion(s, pair, car))

    s = np.asarray(state, dtype=float)
    k1 = f(s)
    k2 = f(s + 0.5 * h * k1)
    k3 = f(s + 0.5 * h * k2)
    k4 = f(s + h * k3)
    return s + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def _near_target(state, target, pos_tol, angle_tol):
    dth = abs((state[2] - target[2] + math.pi) % TWO_PI - math.pi)
    return math.hypot(state[0] - target[0], state[1] - target[1]) <= pos_tol and dth <= angle_tol


def simulate(start, sched, scene: Scene | None, car: CarParams, h: float, target=None,
             pos_tol: float = 0.0, angle_tol: float = 0.0, t0: float = 0.0,
             spacing: float = DEFAULT_SPACING) -> SimResult:
    """Integrate the schedule with fixed-step RK4, checking collisions every substep.

    With a ``target`` the run stops at the first substep within the
    tolerances and reports its time.  Without one it returns the end state.
    """
    if not h > 0:
        raise ValueError("substep h must be positive")
    # round-off guard for arrivals that sit exactly on the tolerance boundary
    pos_tol = pos_tol * (1 + 1e-9) + 1e-12
    angle_tol = angle_tol * (1 + 1e-9) + 1e-12
    state = np.array([start[0], start[1], wrap_angle(start[2])], dtype=float)
    t = t0

    def check(st, tt):
        if scene is None:
            return None
        x_min, x_max, y_min, y_max = scene.domain
        if not (x_min <= st[0] <= x_max and y_min <= st[1] <= y_max):
            return "left_domain"
        if tt <= scene.horizon and collides(st, tt, scene, car, spacing):
            return "collision"
        return None

    bad = check(state, t)
    if bad:
        return SimResult(bad, t, tuple(state))
    if target is not None and _near_target(state, target, pos_tol, angle_tol):
        return SimResult("arrived", t, tuple(state))
    for seg in sched:
        if seg.duration < 0:
            raise ValueError("segment durations must be non-negative")
        if seg.duration == 0:
            continue
        n = max(1, math.ceil(seg.duration / h - 1e-9))
        hh = seg.duration / n
        for _ in range(n):
            state = _rk4(state, seg.pair, car, hh)
            state[2] = wrap_angle(state[2])
            t += hh
            bad = check(state, t)
            if bad:
                return SimResult(bad, t, tuple(state))
            if target is not None and _near_target(state, target, pos_tol, angle_tol):
                return SimResult("arrived", t, tuple(state))
    status = "not_arrived" if target is not None else "done"
    return SimResult(status, t, tuple(state))


# ---------------------------------------------------------------------------
# closed-form propagation used to rank schedules


def _propagate(x, y, th, v, w, tau, car: CarParams):
    """Exact end state of a constant-control segment (arrays broadcast)."""
    if w == 0:
        return x + v * tau * np.cos(th), y + v * tau * np.sin(th), th
    ww = w * car.W
    th1 = th + ww * tau
    s0, c0, s1, c1 = np.sin(th), np.cos(th), np.sin(th1), np.cos(th1)
    x1 = x + v * (s1 - s0) / ww + car.d * (c1 - c0)
    y1 = y - v * (c1 - c0) / ww + car.d * (s1 - s0)
    return x1, y1, th1


def _first_arrival(x, y, th, pair, car, target, pos_tol, angle_tol, tau_max):
    """Earliest time within ``[0, tau_max]`` at which a constant-control segment
    from ``(x, y, th)`` is within tolerance of the target; inf if never."""
    v, w = pair
    xf, yf, thf = target
    x, y, th = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float), np.asarray(th, float))
    tau_max = np.broadcast_to(np.asarray(tau_max, float), x.shape)
    gap = np.abs(np.mod(th - thf + math.pi, TWO_PI) - math.pi)
    dx, dy = xf - x, yf - y
    inside0 = (np.hypot(dx, dy) <= pos_tol) & (gap <= angle_tol)
    out = np.full(x.shape, np.inf)
    out[inside0] = 0.0
    if v == 0 and w == 0:
        return out
    if w == 0:
        ex, ey = np.cos(th), np.sin(th)
        proj = v * (ex * dx + ey * dy)
        disc = proj ** 2 - (dx * dx + dy * dy) + pos_tol ** 2
        ok = (gap <= angle_tol) & (disc >= 0)
        root = np.sqrt(np.maximum(disc, 0.0))
        tau = np.maximum(proj - root, 0.0)
        ok &= (proj + root >= 0) & (tau <= tau_max)
        return np.where(ok, np.minimum(out, tau), out)
    # arc: the center of mass turns on a circle of radius rho around (cx, cy)
    ww = w * car.W
    a, b = car.d, -v / ww
    cx = x - (a * np.cos(th) - b * np.sin(th))
    cy = y - (a * np.sin(th) + b * np.cos(th))
    beta = math.atan2(b, a)
    rho = math.hypot(a, b)
    L = np.hypot(xf - cx, yf - cy)
    gamma = np.arctan2(yf - cy, xf - cx)
    with np.errstate(divide="ignore", invalid="ignore"):
        cstar = (rho * rho + L * L - pos_tol ** 2) / (2 * rho * np.maximum(L, 1e-300))
    cstar = np.where(L < 1e-300, np.where(rho <= pos_tol, -1.0, 2.0), cstar)
    alpha = np.arccos(np.clip(cstar, -1.0, 1.0))
    # heading window for the position condition: theta in [gamma - beta - alpha, gamma - beta + alpha]
    pos_lo = gamma - beta - alpha
    pos_hi = gamma - beta + alpha
    head_lo = thf - angle_tol
    head_hi = thf + angle_tol
    period = TWO_PI / car.W
    speed = car.W

    def entry(lo, hi):
        # first time theta(tau) = th + ww tau enters [lo, hi] (mod 2 pi)
        if w > 0:
            return np.mod(lo - th, TWO_PI) / speed
        return np.mod(th - hi, TWO_PI) / speed

    cands = [np.zeros(x.shape)]
    for lo, hi in ((pos_lo, pos_hi), (head_lo, head_hi)):
        e = entry(lo, hi)
        cands += [e, e + period]
    best = out.copy()
    feasible = cstar <= 1.0
    for tau in cands:
        px, py, pth = _propagate(x, y, th, v, w, tau, car)
        g2 = np.abs(np.mod(pth - thf + math.pi, TWO_PI) - math.pi)
        ok = feasible & (np.hypot(px - xf, py - yf) <= pos_tol * (1 + 1e-9) + 1e-12)
        ok &= (g2 <= angle_tol * (1 + 1e-9) + 1e-12) & (tau <= tau_max)
        best = np.where(ok, np.minimum(best, tau), best)
    return best


@dataclass
class ShootingResult:
    best_time: float | None
    best_schedule: tuple[Segment, ...] | None
    tried: int
    verified: int = 0

    @property
    def found(self) -> bool:
        return self.best_time is not None


def shoot(start, target, scene: Scene | None, car: CarParams, depth: int, durations,
          pos_tol: float, angle_tol: float, horizon: float | None = None, h: float = 0.0025,
          max_verify: int = 2000, spacing: float = DEFAULT_SPACING) -> ShootingResult:
    """Best arrival over all schedules with ``depth`` segments (durations of all but the
    last on the grid ``durations``; the last runs up to ``max(durations)``)."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    durations = np.unique(np.asarray(durations, dtype=float))
    if durations.size == 0 or durations[0] < 0:
        raise ValueError("durations must be a non-empty grid of non-negative times")
    if horizon is None:
        horizon = scene.horizon if scene is not None else float("inf")
    last_max = float(durations[-1])
    start = Configuration.make(*start)

    # enumerate prefixes level by level in closed form
    x = np.array([start.x])
    y = np.array([start.y])
    th = np.array([start.theta])
    elapsed = np.zeros(1)
    prefix_ids = np.zeros((1, 0), dtype=np.int32)  # per prefix: (pair, duration index) pairs flattened
    for _ in range(depth - 1):
        nx, ny, nth, nel, nid = [], [], [], [], []
        for p, pair in enumerate(CONTROL_PAIRS):
            for di, dur in enumerate(durations):
                px, py, pth = _propagate(x, y, th, pair.v, pair.w, dur, car)
                nx.append(px)
                ny.append(py)
                nth.append(np.broadcast_to(pth, x.shape))
                nel.append(elapsed + dur)
                nid.append(np.column_stack([prefix_ids, np.full((x.size, 2), (p, di), dtype=np.int32)]))
        x, y, th = np.concatenate(nx), np.concatenate(ny), np.concatenate(nth)
        elapsed, prefix_ids = np.concatenate(nel), np.concatenate(nid)
        keep = elapsed <= horizon
        x, y, th, elapsed, prefix_ids = x[keep], y[keep], th[keep], elapsed[keep], prefix_ids[keep]

    # last segment: earliest tolerance entry for each pair
    cand_t, cand_prefix, cand_pair, cand_tau = [], [], [], []
    for p, pair in enumerate(CONTROL_PAIRS):
        tau_max = np.minimum(last_max, horizon - elapsed)
        tau = _first_arrival(x, y, th, pair, car, target, pos_tol, angle_tol, tau_max)
        ok = np.isfinite(tau)
        cand_t.append(elapsed[ok] + tau[ok])
        cand_prefix.append(np.nonzero(ok)[0])
        cand_pair.append(np.full(ok.sum(), p))
        cand_tau.append(tau[ok])
    tried = int(x.size * len(CONTROL_PAIRS))
    cand_t = np.concatenate(cand_t)
    if cand_t.size == 0:
        return ShootingResult(None, None, tried)
    cand_prefix = np.concatenate(cand_prefix)
    cand_pair = np.concatenate(cand_pair)
    cand_tau = np.concatenate(cand_tau)

    verified = 0
    for c in np.argsort(cand_t, kind="stable")[:max_verify]:
        ids = prefix_ids[cand_prefix[c]].reshape(-1, 2)
        segs = [Segment(CONTROL_PAIRS[p], float(durations[di])) for p, di in ids]
        segs.append(Segment(CONTROL_PAIRS[cand_pair[c]], float(cand_tau[c])))
        sched = tuple(s for s in segs if s.duration > 0)
        verified += 1
        res = simulate(start, sched, scene, car, h, target, pos_tol, angle_tol)
        if res.arrived:
            return ShootingResult(res.time, sched, tried, verified)
        # RK4 can drift a hair outside a grazing window; accept a clean end state
        if res.status == "not_arrived" and _near_target(res.state, target, pos_tol * (1 + 1e-6) + 1e-9,
                                                        angle_tol * (1 + 1e-6) + 1e-9):
            return ShootingResult(res.time, sched, tried, verified)
    return ShootingResult(None, None, tried, verified)


def schedules(depth: int, durations) -> itertools.product:
    """All schedules with exactly ``depth`` grid-duration segments (for small brute-force checks)."""
    segs = [Segment(p, float(d)) for p in CONTROL_PAIRS for d in durations]
    return itertools.product(segs, repeat=depth)
