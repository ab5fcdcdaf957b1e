"""On-disk formats: slice dumps, manifest, value CSVs and PPM frames."""
from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .grid import Grid4, NodeIndex, cfl_max_dt
from .kinematics import CarParams
from .scene import Scene, StaticPolygon, footprint, occupied, scene_from_dict
from .solver import ValueFunction

HEADER = struct.Struct("<4i")


def slice_path(directory, n: int) -> Path:
    return Path(directory) / f"slice_{n:06d}.bin"


def write_slice(path, values: np.ndarray, n: int) -> None:
    """16-byte header ``(I, J, K, n)`` as little-endian int32, then float32 values in (i, j, k) order."""
    values = np.asarray(values)
    ni, nj, K = values.shape
    with open(path, "wb") as fh:
        fh.write(HEADER.pack(ni - 1, nj - 1, K, n))
        fh.write(np.ascontiguousarray(values, dtype="<f4").tobytes())


def read_slice(path) -> tuple[np.ndarray, int]:
    raw = Path(path).read_bytes()
    if len(raw) < HEADER.size:
        raise ValueError(f"{path}: truncated header")
    I, J, K, n = HEADER.unpack_from(raw)
    count = (I + 1) * (J + 1) * K
    body = raw[HEADER.size:]
    if len(body) != 4 * count:
        raise ValueError(f"{path}: expected {4 * count} bytes of values, found {len(body)}")
    return np.frombuffer(body, dtype="<f4").reshape(I + 1, J + 1, K).astype(np.float32), n


def grid_to_dict(g: Grid4) -> dict:
    return {
        "domain": list(g.domain),
        "I": g.I,
        "J": g.J,
        "K": g.K,
        "N": g.N,
        "T": g.T,
        "dx": g.dx,
        "dy": g.dy,
        "dtheta": g.dtheta,
        "dt": g.dt,
    }


def grid_from_dict(d: dict) -> Grid4:
    x_min, x_max, y_min, y_max = d["domain"]
    return Grid4(x_min, x_max, y_min, y_max, d["I"], d["J"], d["K"], d["N"], d["T"])


def write_solution(directory, vf: ValueFunction, scene: Scene, safety: float, extra: dict | None = None) -> dict:
    """Dump every stored slice plus ``manifest.json``; returns the manifest."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    for sl, n in zip(vf.slices, vf.steps):
        write_slice(slice_path(out, int(n)), sl, int(n))
    g = vf.grid
    manifest = {
        "grid": grid_to_dict(g),
        "cfl": {
            "max_dt": cfl_max_dt(g.dx, g.dy, g.dtheta, vf.car),
            "dt": g.dt,
            "cfl_number": g.cfl_number(vf.car),
            "safety": safety,
        },
        "sentinel": vf.sentinel,
        "stride": vf.stride,
        "steps": [int(n) for n in vf.steps],
        "target_node": list(vf.target[:3]),
        "wall_time": vf.info.get("wall_time"),
        "reachable_fraction": vf.info.get("reachable_fraction"),
        "target_blocked_steps": vf.info.get("target_blocked_steps", 0),
        "scene": scene.to_dict(),
    }
    if extra:
        manifest.update(extra)
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return manifest


def read_solution(directory) -> tuple[ValueFunction, Scene, dict]:
    d = Path(directory)
    manifest = json.loads((d / "manifest.json").read_text(encoding="utf-8"))
    g = grid_from_dict(manifest["grid"])
    scene = scene_from_dict(manifest["scene"])
    steps = np.array(manifest["steps"], dtype=int)
    slices = np.empty((len(steps),) + g.shape, dtype=np.float32)
    for s, n in enumerate(steps):
        values, n_file = read_slice(slice_path(d, int(n)))
        if values.shape != g.shape or n_file != n:
            raise ValueError(f"slice {n}: header does not match the manifest grid")
        slices[s] = values
    vf = ValueFunction(g, scene.car, slices, steps, float(manifest["sentinel"]),
                       NodeIndex(*manifest["target_node"], 0), int(manifest["stride"]),
                       {"wall_time": manifest.get("wall_time"),
                        "reachable_fraction": manifest.get("reachable_fraction")})
    return vf, scene, manifest


def write_value_csv(path, vf: ValueFunction, k: int, n: int) -> None:
    """Export the (x, y) slice at heading index ``k`` and stored time index ``n``."""
    g = vf.grid
    values = vf.slice_at_step(n)[:, :, k]
    X, Y = np.meshgrid(g.xs, g.ys, indexing="ij")
    table = np.column_stack([X.ravel(), Y.ravel(), values.ravel()])
    np.savetxt(path, table, delimiter=",", header="x,y,u", comments="", fmt="%.9g")


# ---------------------------------------------------------------------------
# raster frames

PALETTE = np.array(
    [
        [20, 20, 20],
        [40, 70, 200],
        [30, 30, 30],
        [60, 90, 210],
        [90, 90, 90],
        [0, 110, 160],
    ],
    dtype=np.uint8,
)
TRACE_COLORS = np.array(
    [[230, 120, 20], [200, 40, 160], [120, 120, 120], [40, 170, 60], [0, 160, 200], [150, 80, 30]],
    dtype=np.uint8,
)


def write_ppm(path, image: np.ndarray) -> None:
    image = np.asarray(image, dtype=np.uint8)
    h, w, _ = image.shape
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(image).tobytes())


def read_ppm(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    parts = raw.split(maxsplit=4)
    if parts[0] != b"P6":
        raise ValueError("not a binary PPM")
    w, h = int(parts[1]), int(parts[2])
    return np.frombuffer(parts[4][: w * h * 3], dtype=np.uint8).reshape(h, w, 3)


class Canvas:
    def __init__(self, domain, size: int):
        self.x_min, self.x_max, self.y_min, self.y_max = domain
        self.w = size
        self.h = max(1, int(round(size * (self.y_max - self.y_min) / (self.x_max - self.x_min))))
        self.img = np.full((self.h, self.w, 3), 255, dtype=np.uint8)
        px = self.x_min + (np.arange(self.w) + 0.5) * (self.x_max - self.x_min) / self.w
        py = self.y_max - (np.arange(self.h) + 0.5) * (self.y_max - self.y_min) / self.h
        self.PX, self.PY = np.meshgrid(px, py)

    def to_pixel(self, x, y):
        c = (np.asarray(x) - self.x_min) / (self.x_max - self.x_min) * self.w
        r = (self.y_max - np.asarray(y)) / (self.y_max - self.y_min) * self.h
        return r, c

    def fill(self, mask, color):
        self.img[mask] = color

    def line(self, x0, y0, x1, y1, color):
        r0, c0 = self.to_pixel(x0, y0)
        r1, c1 = self.to_pixel(x1, y1)
        n = int(max(abs(r1 - r0), abs(c1 - c0))) + 2
        rr = np.clip(np.round(np.linspace(r0, r1, n)).astype(int), 0, self.h - 1)
        cc = np.clip(np.round(np.linspace(c0, c1, n)).astype(int), 0, self.w - 1)
        self.img[rr, cc] = color

    def star(self, x, y, color, radius: int = 4):
        r, c = self.to_pixel(x, y)
        r, c = int(r), int(c)
        for d in range(-radius, radius + 1):
            for rr, cc in ((r + d, c), (r, c + d), (r + d, c + d), (r + d, c - d)):
                if 0 <= rr < self.h and 0 <= cc < self.w:
                    self.img[rr, cc] = color


def render_frame(scene: Scene, t: float, size: int = 400, trajectories=(), car: CarParams | None = None,
                 show_footprints: bool = True) -> np.ndarray:
    """Obstacles at time ``t`` with each trajectory drawn up to ``t`` and the car body at ``t``.

    The target is a red star, trajectory starts are green stars.
    """
    car = car or scene.car
    cv = Canvas(scene.domain, size)
    for o_idx, obs in enumerate(scene.obstacles):
        cv.fill(obs.occupied(cv.PX, cv.PY, t) & scene.in_domain(cv.PX, cv.PY), PALETTE[o_idx % len(PALETTE)])
    for tr_idx, tr in enumerate(trajectories):
        color = TRACE_COLORS[tr_idx % len(TRACE_COLORS)]
        s = tr.samples
        upto = s[s[:, 0] <= t + 1e-12]
        for a, b in zip(upto[:-1], upto[1:]):
            cv.line(a[1], a[2], b[1], b[2], color)
        if show_footprints and len(upto):
            x, y, th = upto[-1, 1:4]
            corners = footprint((x, y, th), car)
            if car.body_half_length > 0 and car.body_half_width > 0:
                body = StaticPolygon(vertices=tuple(map(tuple, corners)))
                cv.fill(body.occupied(cv.PX, cv.PY, 0.0), color)
            for a, b in zip(corners, np.roll(corners, -1, axis=0)):
                cv.line(a[0], a[1], b[0], b[1], (0, 0, 0))
        cv.star(s[0, 1], s[0, 2], (20, 180, 40))
    cv.star(scene.target.x, scene.target.y, (220, 20, 20))
    return cv.img


def occupancy_image(scene: Scene, t: float, size: int = 200) -> np.ndarray:
    cv = Canvas(scene.domain, size)
    return occupied(cv.PX, cv.PY, t, scene)
