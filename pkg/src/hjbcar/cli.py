"""Command-line front end: ``solve``, ``trace``, ``verify`` and ``render``.

Exit codes: 0 success, 2 validation failure, 3 scene/config schema error.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import checks, scenes
from .fileio import read_solution, render_frame, write_ppm, write_solution, write_value_csv
from .grid import CFLError, Grid4
from .kinematics import Configuration
from .scene import Scene, SceneSchemaError, load_scene
from .solver import Solver, SolverParams, TargetError
from .tracer import TraceError, TracerParams, read_trajectory_csv, trace, validate_trajectory

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SCHEMA = 3

log = logging.getLogger("hjbcar")


def resolve_scene(source: str, horizon: float | None = None) -> Scene:
    """``builtin:NAME`` or a path to a scene JSON file; ``horizon`` overrides the file."""
    if source.startswith("builtin:"):
        name = source.split(":", 1)[1]
        if name not in scenes.BUILTIN:
            raise SceneSchemaError(f"unknown builtin scene {name!r}; choose from {sorted(scenes.BUILTIN)}")
        scene = scenes.BUILTIN[name]()
    else:
        scene = load_scene(source)
    if horizon is not None:
        if not horizon > 0:
            raise SceneSchemaError("horizon must be positive", "horizon")
        scene = replace(scene, horizon=float(horizon))
    return scene


def _grid(scene: Scene, args) -> Grid4:
    I, J, K = args.grid
    if min(I, J, K) <= 0:
        raise SceneSchemaError(f"grid resolution must be positive, got {I} {J} {K}", "grid")
    return Grid4.with_cfl(scene.domain, I, J, K, scene.horizon, scene.car, args.safety)


def _starts(scene: Scene, args) -> list[Configuration]:
    if args.start:
        return [Configuration.make(*s) for s in args.start]
    return list(scene.starts)


def cmd_solve(args) -> int:
    scene = resolve_scene(args.scene, args.horizon)
    g = _grid(scene, args)
    params = SolverParams(sentinel=args.sentinel, cfl_safety=args.safety, stride=args.stride,
                          memory_budget=args.memory_budget)
    vf = Solver(scene, g, params).solve()
    manifest = write_solution(args.out, vf, scene, args.safety)
    if args.csv_theta is not None:
        k = g.snap_config((0.5 * (g.x_min + g.x_max), 0.5 * (g.y_min + g.y_max), args.csv_theta)).k
        write_value_csv(Path(args.out) / f"value_k{k:03d}_n000000.csv", vf, k, 0)
    print(json.dumps({key: manifest[key] for key in ("cfl", "wall_time", "reachable_fraction")}, indent=2))
    return EXIT_OK


def _load(args):
    vf, solved_scene, manifest = read_solution(args.solution)
    scene = resolve_scene(args.scene, args.horizon) if args.scene else solved_scene
    return vf, scene, manifest


def cmd_trace(args) -> int:
    vf, scene, _ = _load(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    params = TracerParams(delta=args.delta)
    reports = []
    trajectories = []
    status = EXIT_OK
    for idx, start in enumerate(_starts(scene, args)):
        tr = trace(vf, start, scene, vf.car, params)
        tr.to_csv(out / f"trajectory_{idx:02d}.csv")
        rep = validate_trajectory(tr, scene, vf.car, oversample=args.oversample)
        reports.append({"start": list(start), "arrived": tr.arrived, "arrival_time": tr.arrival_time,
                        "longest_wait": tr.longest_wait(), "validation": rep.to_dict()})
        trajectories.append(tr)
        if not (rep.passed and tr.arrived):
            status = EXIT_VALIDATION
    if trajectories and args.frames > 0:
        end = max(tr.samples[-1, 0] for tr in trajectories)
        for f, t in enumerate(np.linspace(0.0, min(end, scene.horizon), args.frames)):
            write_ppm(out / f"frame_{f:03d}.ppm", render_frame(scene, float(t), args.size, trajectories))
    (out / "trace_report.json").write_text(json.dumps(reports, indent=2) + "\n", encoding="utf-8")
    print(json.dumps(reports, indent=2))
    return status


def cmd_verify(args) -> int:
    vf, scene, _ = _load(args)
    rng = np.random.default_rng(args.seed)
    report = {"consistency": checks.slice_consistency(vf, scene), "lower_bound": checks.lower_bound(vf)}
    if args.oracle_starts > 0:
        starts = checks.random_legal_starts(scene, vf.grid, args.oracle_starts, rng, vf=vf)
        report["oracle"] = checks.oracle_dominance(vf, scene, starts, depth=args.depth)
    if scene.is_static:
        report["stationarity"] = checks.stationarity(vf)
    traces = []
    for start in _starts(scene, args):
        try:
            tr = trace(vf, start, scene, vf.car)
        except TraceError as exc:
            traces.append({"start": list(start), "passed": False, "violation": str(exc)})
            continue
        rep = validate_trajectory(tr, scene, vf.car, oversample=10)
        traces.append({"start": list(start), "arrived": tr.arrived, **rep.to_dict(),
                       "passed": rep.passed and tr.arrived})
    report["trajectories"] = {"records": traces, "passed": all(t["passed"] for t in traces)}
    report["passed"] = all(section["passed"] for section in report.values() if isinstance(section, dict))
    text = json.dumps(report, indent=2, default=float)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    print(text)
    return EXIT_OK if report["passed"] else EXIT_VALIDATION


def cmd_render(args) -> int:
    scene = resolve_scene(args.scene, args.horizon)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    trajectories = [read_trajectory_csv(p) for p in args.trajectory]
    times = args.times if args.times else list(np.linspace(0.0, scene.horizon, args.frames))
    for f, t in enumerate(times):
        if not 0 <= t <= scene.horizon:
            raise SceneSchemaError(f"render time {t} outside [0, {scene.horizon}]", "times")
        write_ppm(out / f"frame_{f:03d}.ppm", render_frame(scene, float(t), args.size, trajectories))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hjbcar", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def scene_args(p, required=True):
        p.add_argument("scene", nargs=None if required else "?", help="scene JSON path or builtin:NAME")
        p.add_argument("--horizon", type=float, help="override the scene horizon T")

    def start_arg(p):
        p.add_argument("--start", nargs=3, type=float, action="append", metavar=("X", "Y", "THETA"),
                       help="start configuration (repeatable); defaults to the scene's starts")

    p = sub.add_parser("solve", help="solve the HJB equation and dump slices")
    scene_args(p)
    p.add_argument("--grid", nargs=3, type=int, default=[50, 50, 64], metavar=("I", "J", "K"),
                   help="cells along x and y, heading nodes")
    p.add_argument("--safety", type=float, default=0.9, help="CFL safety factor")
    p.add_argument("--sentinel", type=float, help="value standing in for infinity (default 2T)")
    p.add_argument("--stride", type=int, help="store every STRIDE-th time slice")
    p.add_argument("--memory-budget", type=float, default=1e9, help="bytes for stored slices")
    p.add_argument("--csv-theta", type=float, help="also export the t=0 slice nearest this heading as CSV")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("trace", help="extract trajectories from a solution")
    scene_args(p, required=False)
    p.add_argument("--solution", required=True)
    start_arg(p)
    p.add_argument("--delta", type=float, help="tracer time step")
    p.add_argument("--oversample", type=int, default=10)
    p.add_argument("--frames", type=int, default=4)
    p.add_argument("--size", type=int, default=400)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("verify", help="run property checks on a solution")
    scene_args(p, required=False)
    p.add_argument("--solution", required=True)
    start_arg(p)
    p.add_argument("--oracle-starts", type=int, default=5)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", help="render obstacle frames with optional trajectories")
    scene_args(p)
    p.add_argument("--trajectory", action="append", default=[], help="trajectory CSV (repeatable)")
    p.add_argument("--times", nargs="+", type=float)
    p.add_argument("--frames", type=int, default=4)
    p.add_argument("--size", type=int, default=400)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except SceneSchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (TargetError, TraceError, CFLError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())
