"""Property checks on solved value functions and traced paths."""
from __future__ import annotations

import math

import numpy as np

from .grid import Grid4
from .kinematics import CarParams
from .oracle import shoot
from .scene import Scene, collides, collides_many, illegal_mask
from .solver import UpwindTable, ValueFunction, step_backward
from .tracer import TracerParams, interpolate


def slice_consistency(vf: ValueFunction, scene: Scene, recompute_pairs: int = 2, atol: float = 1e-4) -> dict:
    """Check stored slices against the solver invariants and re-run a few backward steps."""
    g = vf.grid
    M = vf.sentinel
    M32 = float(np.float32(M))
    problems = []
    tgt = vf.target
    for s, n in enumerate(vf.steps):
        sl = vf.slices[s]
        if not np.all(np.isfinite(sl)):
            problems.append(f"step {n}: non-finite values")
            continue
        if sl.min() < 0 or sl.max() > M32:
            problems.append(f"step {n}: values outside [0, M]")
        if sl[tgt.i, tgt.j, tgt.k] != 0:
            problems.append(f"step {n}: target value {sl[tgt.i, tgt.j, tgt.k]} != 0")
        border = np.concatenate([sl[0].ravel(), sl[-1].ravel(), sl[:, 0].ravel(), sl[:, -1].ravel()])
        if np.any(border != M32):
            problems.append(f"step {n}: boundary nodes not at the sentinel")
    # replay the last stored intervals from the later slice
    table = UpwindTable.build(g, vf.car)
    pairs = list(zip(vf.steps[:-1], vf.steps[1:]))[-recompute_pairs:] if recompute_pairs else []
    for n0, n1 in pairs:
        u = vf.slice_at_step(int(n1)).astype(np.float64)
        for n in range(int(n1) - 1, int(n0) - 1, -1):
            mask = illegal_mask(scene, g, n, vf.car)
            if n == n0:
                masked = vf.slice_at_step(int(n0))[mask]
                if masked.size and np.any(masked != M32):
                    problems.append(f"step {n}: illegal nodes not at the sentinel")
            u = step_backward(u, mask, g, vf.car, tgt, M, table)
        err = float(np.max(np.abs(u - vf.slice_at_step(int(n0)))))
        if err > atol * max(1.0, M):
            problems.append(f"steps {n0}..{n1}: replay differs by {err:.3g}")
    return {"passed": not problems, "problems": problems}


def random_legal_starts(scene: Scene, grid: Grid4, count: int, rng, border: float = 0.15, t: float = 0.0,
                        vf: ValueFunction | None = None) -> list[tuple[float, float, float]]:
    """Random collision-free configurations at least ``border`` from the domain edge
    (and reachable, when ``vf`` is given)."""
    x_min, x_max, y_min, y_max = scene.domain
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 1000 * count:
            raise RuntimeError("could not find enough legal starts")
        c = (rng.uniform(x_min + border, x_max - border), rng.uniform(y_min + border, y_max - border),
             rng.uniform(0, 2 * math.pi))
        if collides(c, t, scene, scene.car, min(grid.dx, grid.dy) / 2):
            continue
        if vf is not None and interpolate(vf, *c, t) >= grid.T:
            continue
        out.append(c)
    return out


def arrival_slack(pos_tol: float, angle_tol: float, car: CarParams) -> float:
    """Time to cover the arrival tolerances at top speed and top turn rate."""
    return pos_tol + angle_tol / car.W


def oracle_dominance(vf: ValueFunction, scene: Scene, starts, depth: int = 3, durations=None,
                     tracer: TracerParams | None = None) -> dict:
    """Upper bound ``u <= oracle + 2 dt + slack`` and lower bound ``u >= distance - 2 max(dx, dy)``."""
    g = vf.grid
    p = (tracer or TracerParams()).resolve(vf)
    if durations is None:
        durations = np.linspace(0.0, min(1.6, g.T), 65)
    slack = arrival_slack(p.pos_tol, p.angle_tol, vf.car)
    tx, ty = g.node_to_config(vf.target)[0][:2]
    records = []
    for c in starts:
        u = float(interpolate(vf, *c, 0.0))
        res = shoot(c, scene.target, scene, vf.car, depth, durations, p.pos_tol, p.angle_tol, horizon=g.T)
        dist = math.hypot(c[0] - tx, c[1] - ty)
        upper_ok = (not res.found) or u <= res.best_time + 2 * g.dt + slack
        lower_ok = u >= dist - 2 * max(g.dx, g.dy)
        records.append({
            "start": [float(v) for v in c],
            "value": u,
            "oracle": res.best_time,
            "distance": dist,
            "upper_ok": bool(upper_ok),
            "lower_ok": bool(lower_ok),
        })
    found = [r for r in records if r["oracle"] is not None]
    return {
        "records": records,
        "slack": slack,
        "found": len(found),
        "upper_violations": sum(not r["upper_ok"] for r in records),
        "lower_violations": sum(not r["lower_ok"] for r in records),
        "passed": all(r["upper_ok"] and r["lower_ok"] for r in records),
    }


def lower_bound(vf: ValueFunction) -> dict:
    """Every reachable node must need at least its distance to the target (minus grid slack).

    The bound uses the top speed of the center of mass, sqrt(1 + (W d)^2).
    """
    g = vf.grid
    u0 = vf.initial()
    X, Y = np.meshgrid(g.xs, g.ys, indexing="ij")
    tx, ty = g.node_to_config(vf.target)[0][:2]
    dist = np.hypot(X - tx, Y - ty)[:, :, None]
    vmax = math.hypot(1.0, vf.car.W * vf.car.d)
    reach = u0 < g.T
    bad = reach & (u0 < dist / vmax - 2 * max(g.dx, g.dy))
    return {"checked": int(reach.sum()), "violations": int(bad.sum()), "passed": not bad.any()}


def stationarity(vf: ValueFunction, fraction: float = 0.25) -> dict:
    """Compare the time-0 slice with the stored slice nearest ``fraction * T``."""
    g = vf.grid
    s = int(np.argmin(np.abs(vf.times - fraction * g.T)))
    a = vf.initial().astype(float)
    b = vf.slices[s].astype(float)
    both = (a < g.T / 2) & (b < g.T / 2)
    diff = float(np.max(np.abs(a - b)[both])) if both.any() else 0.0
    tol = 2 * max(g.dx, g.dy)
    return {"time": float(vf.times[s]), "max_diff": diff, "tolerance": tol, "nodes": int(both.sum()),
            "passed": diff <= tol}


def monotonicity(grid: Grid4, car: CarParams, trials: int, rng, sentinel: float | None = None) -> dict:
    """Raise a random slice componentwise and check that no output of a backward step drops."""
    M = 2 * grid.T if sentinel is None else sentinel
    table = UpwindTable.build(grid, car)
    tgt = grid.snap_config(((grid.x_min + grid.x_max) / 2, (grid.y_min + grid.y_max) / 2, 0.0))
    violations = 0
    worst = 0.0
    for _ in range(trials):
        base = rng.uniform(0, M, grid.shape)
        base[rng.random(grid.shape) < 0.2] = M
        bump = rng.uniform(0, 0.5, grid.shape) * (rng.random(grid.shape) < 0.5)
        raised = np.minimum(base + bump, M)
        mask = rng.random(grid.shape) < 0.05
        lo = step_backward(base, mask, grid, car, tgt, M, table)
        hi = step_backward(raised, mask, grid, car, tgt, M, table)
        drop = float(np.max(lo - hi))
        worst = max(worst, drop)
        violations += drop > 1e-12
    return {"trials": trials, "violations": violations, "worst_drop": worst, "passed": violations == 0}


def masks_equal(scene: Scene, grid: Grid4, car: CarParams, t0: float, t1: float) -> bool:
    X, Y, TH = np.meshgrid(grid.xs, grid.ys, grid.thetas, indexing="ij")
    sp = min(grid.dx, grid.dy) / 2
    return bool(np.array_equal(collides_many(X, Y, TH, t0, scene, car, sp),
                               collides_many(X, Y, TH, t1, scene, car, sp)))
