"""
Checking the solver against brute force
=======================================

``shoot`` tries every bang-bang schedule of up to three segments and keeps
the fastest one that a collision-checked RK4 simulation confirms.  Every
such schedule is an admissible plan, so the true travel time can be no
larger.  Here we put the solver values next to the shooting results for a
few starts.  Starts aligned with the target agree closely; for oblique
starts the grid value runs noticeably above the brute-force time, which is
the numerical diffusion of the first-order scheme at this resolution.
"""
import math

import numpy as np

from hjbcar import Grid4, Solver, TracerParams, interpolate, shoot
from hjbcar import scenes

scene = scenes.free_space(target=(0.5, 0.0, 0.0), horizon=3.0)
grid = Grid4.with_cfl(scene.domain, 50, 50, 64, scene.horizon, scene.car)
vf = Solver(scene, grid).solve()
p = TracerParams().resolve(vf)

durations = np.linspace(0, 1.6, 65)
print(f"{'start':>24}  {'solver':>7}  {'oracle':>7}  distance")
for start in [(-0.5, 0.0, 0.0), (0.0, 0.0, 0.0), (0.0, -0.4, math.pi / 2), (-0.3, 0.5, math.pi),
              (0.6, 0.6, 4.0)]:
    u = interpolate(vf, *start, 0.0)
    res = shoot(start, scene.target, scene, scene.car, 3, durations, p.pos_tol, p.angle_tol, horizon=grid.T)
    best = f"{res.best_time:7.3f}" if res.found else "   none"
    dist = math.hypot(start[0] - 0.5, start[1])
    print(f"{str(tuple(round(v, 2) for v in start)):>24}  {u:7.3f}  {best}  {dist:.3f}")
