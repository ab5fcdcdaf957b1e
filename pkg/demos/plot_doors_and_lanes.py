"""
Sliding doorways and a lane change
==================================

Two more moving-obstacle scenes.  In the first, three walls each have a
doorway sliding up and down at its own period; the car crosses them one by
one, sometimes waiting for a door to line up.  In the second, two cars cruise
east in the upper lane and the planned car merges into the gap between them.
"""
import sys
from pathlib import Path

import numpy as np

from hjbcar import Grid4, Solver, trace, validate_trajectory
from hjbcar import scenes
from hjbcar.fileio import render_frame, write_ppm

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out/doors_and_lanes")
out.mkdir(parents=True, exist_ok=True)

for scene in (scenes.doors(horizon=6.0), scenes.lane_change(horizon=3.0)):
    grid = Grid4.with_cfl(scene.domain, 50, 50, 64, scene.horizon, scene.car)
    vf = Solver(scene, grid).solve()
    tr = trace(vf, scene.starts[0], scene)
    rep = validate_trajectory(tr, scene, scene.car, oversample=10)
    print(f"{scene.name}: solve {vf.info['wall_time']:.0f}s, arrival {tr.arrival_time:.3f},"
          f" longest wait {tr.longest_wait()} steps, valid={rep.passed}")
    tr.to_csv(out / f"{scene.name}.csv")
    for f, t in enumerate(np.linspace(0, tr.duration, 5)):
        write_ppm(out / f"{scene.name}_{f:03d}.ppm", render_frame(scene, float(t), 400, [tr]))
