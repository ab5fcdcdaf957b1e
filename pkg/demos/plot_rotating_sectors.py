"""
Four cars and four rotating walls
=================================

Two inner annular sectors turn counterclockwise three times as fast as
two outer ones.  Cars start in the four corners and must reach the center
facing west.  Whenever the gap is closed the best plan is to stop and wait
for it to come round, and the traced paths contain runs of (0, 0) controls.
"""
import sys
from pathlib import Path

import numpy as np

from hjbcar import Grid4, Solver, trace, validate_trajectory
from hjbcar import scenes
from hjbcar.fileio import render_frame, write_ppm

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out/rotating_sectors")
out.mkdir(parents=True, exist_ok=True)

scene = scenes.rotating_sectors(horizon=5.0)
grid = Grid4.with_cfl(scene.domain, 50, 50, 64, scene.horizon, scene.car)
vf = Solver(scene, grid).solve(progress=lambda n: n % 100 or print(f"  step {n}"))
print(f"solved {grid.N} steps in {vf.info['wall_time']:.0f}s")

paths = []
for idx, start in enumerate(scene.starts):
    tr = trace(vf, start, scene)
    rep = validate_trajectory(tr, scene, scene.car, oversample=10)
    print(f"start {tuple(round(v, 2) for v in start)}: arrival {tr.arrival_time:.3f},"
          f" longest wait {tr.longest_wait()} steps, valid={rep.passed}")
    tr.to_csv(out / f"trajectory_{idx:02d}.csv")
    paths.append(tr)

end = max(tr.duration for tr in paths)
for f, t in enumerate(np.linspace(0, end, 6)):
    write_ppm(out / f"frame_{f:03d}.ppm", render_frame(scene, float(t), 400, paths))
print("frames written to", out)
