"""Acceptance criteria at desk-scale resolution.

Each test records one ``PASS``/``FAIL`` line; the lines are printed in the
terminal summary (see conftest.py) and, with ``-s``, as the tests run.
Run alone with ``pytest tests/test_acceptance.py``.
"""
import dataclasses
import json
import math
import time

import numpy as np
import pytest

from hjbcar import checks, scenes
from hjbcar.fileio import write_solution
from hjbcar.grid import CFLError, Grid4, cfl_max_dt
from hjbcar.kinematics import CONTROL_PAIRS, CarParams
from hjbcar.scene import Scene
from hjbcar.solver import Solver, step_backward
from hjbcar.tracer import TracerParams, interpolate, trace, validate_trajectory

pytestmark = pytest.mark.slow

RESULTS: dict[int, str] = {}
GRID = (50, 50, 64)  # cells along x, y and heading nodes: 51 x 51 x 64 nodes
OVERSAMPLE = 10


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)


def solve_scene(scene: Scene, grid=GRID):
    g = Grid4.with_cfl(scene.domain, *grid, scene.horizon, scene.car)
    t0 = time.perf_counter()
    vf = Solver(scene, g).solve()
    return vf, time.perf_counter() - t0


def trace_all(vf, scene, starts):
    out = []
    for s in starts:
        tr = trace(vf, s, scene)
        out.append((tr, validate_trajectory(tr, scene, scene.car, OVERSAMPLE)))
    return out


@pytest.fixture(scope="module")
def free():
    sc = scenes.free_space(target=(0.5, 0.0, 0.0), horizon=3.0)
    vf, wall = solve_scene(sc)
    return sc, vf, wall


@pytest.fixture(scope="module")
def free_traces(free):
    sc, vf, _ = free
    return trace_all(vf, sc, [(-0.5, 0.0, 0.0)])


@pytest.fixture(scope="module")
def arc():
    car = CarParams(d=0.0, R=0.0, W=4.0)
    sc = Scene(scenes.DOMAIN, 3.0, car, scenes.Configuration.make(0.25, 0.25, math.pi / 2), name="arc")
    vf, _ = solve_scene(sc)
    return sc, vf


@pytest.fixture(scope="module")
def arc_traces(arc):
    sc, vf = arc
    return trace_all(vf, sc, [(0.0, 0.0, 0.0)])


@pytest.fixture(scope="module")
def rotating():
    sc = scenes.rotating_sectors(horizon=5.0)
    vf, _ = solve_scene(sc)
    return sc, vf, trace_all(vf, sc, sc.starts)


@pytest.fixture(scope="module")
def doors():
    sc = scenes.doors(horizon=6.0)
    vf, _ = solve_scene(sc)
    return sc, vf, trace_all(vf, sc, sc.starts)


@pytest.fixture(scope="module")
def lane():
    sc = scenes.lane_change(horizon=3.0)
    vf, _ = solve_scene(sc)
    return sc, vf, trace_all(vf, sc, sc.starts)


def test_criterion_1_straight_line(free, free_traces):
    sc, vf, wall = free
    u = interpolate(vf, -0.5, 0.0, 0.0, 0.0)
    tr, rep = free_traces[0]
    dur = tr.arrival_time if tr.arrived else float("nan")
    ok = 0.85 <= u <= 1.15 and tr.arrived and abs(dur - u) <= 0.15 and wall <= 60.0
    record(1, ok, f"u(start,0)={u:.4f} in [0.85,1.15], traced duration {dur:.4f} (|diff|={abs(dur - u):.4f} "
                  f"<= 0.15), solve {wall:.1f}s <= 60s")
    assert ok


def test_criterion_2_point_car_arc(arc):
    sc, vf = arc
    u = interpolate(vf, 0.0, 0.0, 0.0, 0.0)
    ok = 0.31 <= u <= 0.48
    record(2, ok, f"u(start,0)={u:.4f}, required [0.31, 0.48], analytic {math.pi / 8:.4f}")
    assert ok


def test_criterion_3_oracle_dominance(free):
    sc, vf, _ = free
    rng = np.random.default_rng(2024)
    starts = checks.random_legal_starts(sc, vf.grid, 20, rng, vf=vf)
    rep = checks.oracle_dominance(vf, sc, starts, depth=3)
    ok = rep["upper_violations"] == 0 and rep["lower_violations"] == 0
    worst = max((r["value"] - r["oracle"] for r in rep["records"] if r["oracle"] is not None), default=float("nan"))
    record(3, ok, f"20 starts, oracle found {rep['found']}, upper violations {rep['upper_violations']}, "
                  f"lower violations {rep['lower_violations']}; worst u - oracle = {worst:.3f} "
                  f"vs allowed 2dt + slack = {2 * vf.grid.dt + rep['slack']:.3f}")
    assert ok


def test_criterion_4_stationarity():
    # T = 10 as in the demonstrations: with T = 3 the slices near u = T/2 have not
    # finished relaxing and still carry horizon truncation error
    sc = scenes.static_disks(horizon=10.0)
    vf, _ = solve_scene(sc)
    rep = checks.stationarity(vf, 0.25)
    ok = rep["passed"]
    record(4, ok, f"T={sc.horizon:g}, max |u(.,0) - u(.,{rep['time']:.3f})| = {rep['max_diff']:.2e} <= {rep['tolerance']:.3f} "
                  f"over {rep['nodes']} nodes")
    assert ok


def test_criterion_5_monotonicity():
    car = scenes.DEFAULT_CAR
    g = Grid4.with_cfl(scenes.DOMAIN, 16, 16, 16, 1.0, car)  # 17 x 17 x 16 nodes
    rep = checks.monotonicity(g, car, 50, np.random.default_rng(5))
    ok = rep["passed"]
    record(5, ok, f"{rep['trials']} perturbations, {rep['violations']} violations, worst drop {rep['worst_drop']:.2e}")
    assert ok


def test_criterion_6_rotating_sectors(rotating):
    sc, vf, traced = rotating
    arrived = sum(tr.arrived for tr, _ in traced)
    valid = sum(rep.passed for _, rep in traced)
    waits = [tr.longest_wait() for tr, _ in traced]
    ok = arrived == 4 and valid == 4 and max(waits) >= 3
    record(6, ok, f"arrived {arrived}/4, validated {valid}/4 at {OVERSAMPLE}x, longest waits {waits}")
    assert ok


def test_criterion_7_doors_and_lane_change(doors, lane):
    parts = []
    ok = True
    for name, (sc, vf, traced) in (("doors", doors), ("lane change", lane)):
        for tr, rep in traced:
            ok &= tr.arrived and rep.passed
            parts.append(f"{name}: arrived={tr.arrived} at {tr.arrival_time}, valid={rep.passed}")
    record(7, ok, "; ".join(parts))
    assert ok


def test_criterion_8_cfl(free, tmp_path):
    sc, vf, _ = free
    g = vf.grid
    bound = cfl_max_dt(g.dx, g.dy, g.dtheta, sc.car)
    too_big = dataclasses.replace(g, N=math.floor(g.T / bound) - 1)
    rejected = False
    try:
        Solver(sc, too_big)
    except CFLError:
        rejected = True
    try:
        step_backward(vf.initial(), None, too_big, sc.car, vf.target, vf.sentinel)
    except CFLError:
        rejected = rejected and True
    else:
        rejected = False
    write_solution(tmp_path, vf, sc, 0.9)
    m = json.loads((tmp_path / "manifest.json").read_text())
    recorded_ok = m["cfl"]["max_dt"] == bound and m["grid"]["dt"] <= 0.9 * bound * (1 + 1e-12)
    ok = rejected and recorded_ok
    record(8, ok, f"dt={too_big.dt:.5f} > bound {bound:.5f} rejected: {rejected}; manifest dt {m['grid']['dt']:.5f} "
                  f"<= 0.9 * bound = {0.9 * bound:.5f}: {recorded_ok}")
    assert ok


def test_criterion_9_seven_pairs(free_traces, arc_traces, rotating, doors, lane):
    every = [tr for tr, _ in free_traces + arc_traces + rotating[2] + doors[2] + lane[2]]
    used = {c for tr in every for c in tr.controls}
    ok = used <= set(CONTROL_PAIRS) and not ({(0, 1), (0, -1)} & used)
    record(9, ok, f"{len(every)} trajectories, {sum(len(tr.controls) for tr in every)} steps, pairs used {sorted(used)}")
    assert ok


def test_trace_duration_bound(free, free_traces, rotating, doors, lane):
    """Not a numbered criterion: traced duration exceeds u(start, 0) by at most
    2 delta + 2 dt + the time to cross the arrival tolerances."""
    for (sc, vf), traced in (((free[0], free[1]), free_traces), (rotating[:2], rotating[2]),
                             (doors[:2], doors[2]), (lane[:2], lane[2])):
        p = TracerParams().resolve(vf)
        slack = checks.arrival_slack(p.pos_tol, p.angle_tol, vf.car)
        for tr, _ in traced:
            u = interpolate(vf, *tr.start, 0.0)
            assert tr.arrival_time - u <= 2 * p.delta + 2 * vf.grid.dt + slack, (sc.name, tr.arrival_time, u)
