"""
Straight ahead in free space
============================

The smallest interesting problem: an empty square, the car at (-0.5, 0)
facing east and the target one unit further east.  Driving straight at
unit speed takes exactly one time unit, so the solver value at the start
and the traced path should both come out close to 1.
"""
import sys
from pathlib import Path

import numpy as np

from hjbcar import Grid4, Solver, TracerParams, interpolate, trace, validate_trajectory
from hjbcar import scenes
from hjbcar.fileio import render_frame, write_ppm

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out/free_space")
out.mkdir(parents=True, exist_ok=True)

# scene and grid: 51 x 51 nodes in space, 64 headings, horizon 3
scene = scenes.free_space(target=(0.5, 0.0, 0.0), horizon=3.0)
grid = Grid4.with_cfl(scene.domain, 50, 50, 64, scene.horizon, scene.car)
print(f"dx={grid.dx:.3f}  dtheta={grid.dtheta:.4f}  dt={grid.dt:.5f}  N={grid.N}")

# backward sweep from t = T to t = 0
vf = Solver(scene, grid).solve()
print(f"solved in {vf.info['wall_time']:.1f}s, reachable fraction {vf.info['reachable_fraction']:.3f}")

start = (-0.5, 0.0, 0.0)
u0 = interpolate(vf, *start, 0.0)
print(f"u(start, 0) = {u0:.4f}   (exact: 1.0)")

# greedy descent of the interpolated value function
tr = trace(vf, start, scene)
p = TracerParams().resolve(vf)
print(f"arrived at t = {tr.arrival_time:.4f}; the arrival ball has radius {p.pos_tol:.3f},"
      f" so the car stops {p.pos_tol:.3f} short")
print("controls used:", sorted(set(tr.controls)))
print("validation:", validate_trajectory(tr, scene, scene.car).to_dict())

tr.to_csv(out / "trajectory.csv")
write_ppm(out / "final.ppm", render_frame(scene, tr.duration, 300, [tr]))

# a heading slice of the value function, as text: row = y, column = x
k = grid.snap_config((0, 0, 0)).k
coarse = vf.initial()[::10, ::10, k].T[::-1]
print(np.array2string(np.where(coarse < grid.T, coarse, np.inf), precision=2, max_line_width=120))
