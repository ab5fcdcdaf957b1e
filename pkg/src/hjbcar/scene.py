"""Moving obstacles, the car footprint and collision queries.

Every obstacle answers ``occupied(px, py, t)`` for arrays of points and a
``bounding_circle(t)`` used to cull far-away queries.  Collision of the car
with the obstacle set is decided by sampling the body rectangle densely.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Any, ClassVar

import numpy as np

from .kinematics import TWO_PI, CarParams, Configuration


class SceneSchemaError(ValueError):
    """Malformed scene document.  ``path`` names the offending field."""

    def __init__(self, message: str, path: str = "", line: int | None = None):
        where = path or "<root>"
        if line is not None:
            where = f"line {line}: {where}"
        super().__init__(f"{where}: {message}")
        self.path = path
        self.line = line


# ---------------------------------------------------------------------------
# obstacles


@dataclass(frozen=True)
class Obstacle:
    kind: ClassVar[str] = ""
    margin: float = 0.0

    def occupied(self, px, py, t: float) -> np.ndarray:
        raise NotImplementedError

    def bounding_circle(self, t: float) -> tuple[float, float, float]:
        raise NotImplementedError

    @property
    def is_static(self) -> bool:
        return False

    @property
    def period(self) -> float | None:
        return None

    def params(self) -> dict[str, Any]:
        raise NotImplementedError

    def to_dict(self) -> dict[str, Any]:
        out = {"kind": self.kind}
        out.update(self.params())
        if self.margin:
            out["margin"] = self.margin
        return out


@dataclass(frozen=True)
class StaticDisk(Obstacle):
    kind: ClassVar[str] = "static_disk"
    cx: float = 0.0
    cy: float = 0.0
    radius: float = 0.1

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disk radius must be positive")

    @property
    def is_static(self) -> bool:
        return True

    def occupied(self, px, py, t):
        r = self.radius + self.margin
        return (np.asarray(px) - self.cx) ** 2 + (np.asarray(py) - self.cy) ** 2 <= r * r

    def bounding_circle(self, t):
        return (self.cx, self.cy, self.radius + self.margin)

    def params(self):
        return {"center": [self.cx, self.cy], "radius": self.radius}


@dataclass(frozen=True)
class StaticPolygon(Obstacle):
    kind: ClassVar[str] = "static_polygon"
    vertices: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise ValueError("polygon needs at least 3 vertices")

    @property
    def is_static(self) -> bool:
        return True

    def occupied(self, px, py, t):
        px = np.asarray(px, dtype=float)
        py = np.asarray(py, dtype=float)
        verts = np.asarray(self.vertices, dtype=float)
        inside = np.zeros(np.broadcast(px, py).shape, dtype=bool)
        x0, y0 = verts[-1]
        # even-odd crossing rule
        for x1, y1 in verts:
            crosses = (y1 > py) != (y0 > py)
            with np.errstate(divide="ignore", invalid="ignore"):
                x_at = x1 + (py - y1) * (x0 - x1) / (y0 - y1)
            inside ^= crosses & (px < x_at)
            x0, y0 = x1, y1
        if self.margin > 0:
            inside |= _dist_to_polyline(px, py, verts) <= self.margin
        return inside

    def bounding_circle(self, t):
        verts = np.asarray(self.vertices, dtype=float)
        c = verts.mean(axis=0)
        r = float(np.max(np.hypot(*(verts - c).T)))
        return (float(c[0]), float(c[1]), r + self.margin)

    def params(self):
        return {"vertices": [list(v) for v in self.vertices]}


def _dist_to_polyline(px, py, verts):
    d = np.full(np.broadcast(px, py).shape, np.inf)
    closed = np.vstack([verts, verts[:1]])
    for (x0, y0), (x1, y1) in zip(closed[:-1], closed[1:]):
        ex, ey = x1 - x0, y1 - y0
        s = np.clip(((px - x0) * ex + (py - y0) * ey) / (ex * ex + ey * ey), 0.0, 1.0)
        d = np.minimum(d, np.hypot(px - (x0 + s * ex), py - (y0 + s * ey)))
    return d


@dataclass(frozen=True)
class RotatingAnnularSector(Obstacle):
    """Sector of the annulus ``r_in <= r <= r_out`` around ``(cx, cy)``.

    At time ``t`` it spans angles ``[start + omega*t, start + omega*t + width]``;
    positive ``omega`` rotates counterclockwise.
    """

    kind: ClassVar[str] = "rotating_annular_sector"
    cx: float = 0.0
    cy: float = 0.0
    r_in: float = 0.35
    r_out: float = 0.65
    start: float = 0.0
    width: float = math.pi / 4
    omega: float = 0.0

    def __post_init__(self):
        if not 0 <= self.r_in < self.r_out:
            raise ValueError("annular sector needs 0 <= r_in < r_out")
        if not 0 < self.width < TWO_PI:
            raise ValueError("angular width must lie in (0, 2pi)")

    @property
    def is_static(self) -> bool:
        return self.omega == 0

    @property
    def period(self):
        return None if self.omega == 0 else TWO_PI / abs(self.omega)

    def occupied(self, px, py, t):
        dx = np.asarray(px, dtype=float) - self.cx
        dy = np.asarray(py, dtype=float) - self.cy
        m = self.margin
        if m == 0:
            return self._occupied_exact(dx, dy, t)
        r = np.hypot(dx, dy)
        in_ring = (r >= self.r_in - m) & (r <= self.r_out + m)
        phi = np.mod(np.arctan2(dy, dx) - self.start - self.omega * t, TWO_PI)
        # widen the span by the angle the margin subtends; conservative near the center
        pad = np.where(r <= m, math.pi, np.arcsin(np.clip(m / np.maximum(r, 1e-12), 0.0, 1.0)))
        phi = np.mod(phi + pad, TWO_PI)
        return in_ring & (phi <= self.width + 2 * pad)

    def _occupied_exact(self, dx, dy, t):
        # wedge membership by cross products; avoids arctan2 in the hot path
        r2 = dx * dx + dy * dy
        in_ring = (r2 >= self.r_in * self.r_in) & (r2 <= self.r_out * self.r_out)
        a0 = self.start + self.omega * t
        a1 = a0 + self.width
        c0, s0 = math.cos(a0), math.sin(a0)
        c1, s1 = math.cos(a1), math.sin(a1)
        left_of_start = c0 * dy - s0 * dx >= 0
        right_of_end = dx * s1 - dy * c1 >= 0
        if self.width <= math.pi:
            return in_ring & left_of_start & right_of_end
        return in_ring & (left_of_start | right_of_end)

    def bounding_circle(self, t):
        if self.width >= math.pi:
            return (self.cx, self.cy, self.r_out + self.margin)
        a0 = self.start + self.omega * t
        am = a0 + 0.5 * self.width
        rm = 0.5 * (self.r_in + self.r_out)
        ccx = self.cx + rm * math.cos(am)
        ccy = self.cy + rm * math.sin(am)
        rad = 0.0
        for rr in (self.r_in, self.r_out):
            for a in (a0, am, a0 + self.width):
                px = self.cx + rr * math.cos(a)
                py = self.cy + rr * math.sin(a)
                rad = max(rad, math.hypot(px - ccx, py - ccy))
        return (ccx, ccy, rad + self.margin)

    def params(self):
        return {
            "center": [self.cx, self.cy],
            "r_in": self.r_in,
            "r_out": self.r_out,
            "start": self.start,
            "width": self.width,
            "omega": self.omega,
        }


@dataclass(frozen=True)
class OscillatingBar(Obstacle):
    """Axis-aligned rectangle whose center moves as ``c + A sin(2 pi t / P + phase) * axis``."""

    kind: ClassVar[str] = "oscillating_bar"
    cx: float = 0.0
    cy: float = 0.0
    half_x: float = 0.03
    half_y: float = 0.3
    axis: tuple[float, float] = (0.0, 1.0)
    amplitude: float = 0.0
    period_: float = 1.0
    phase: float = 0.0

    def __post_init__(self):
        if not (self.half_x > 0 and self.half_y > 0):
            raise ValueError("bar half sizes must be positive")
        if not self.period_ > 0:
            raise ValueError("oscillation period must be positive")
        n = math.hypot(*self.axis)
        if n == 0:
            raise ValueError("oscillation axis must be nonzero")
        object.__setattr__(self, "axis", (self.axis[0] / n, self.axis[1] / n))

    @property
    def is_static(self) -> bool:
        return self.amplitude == 0

    @property
    def period(self):
        return None if self.amplitude == 0 else self.period_

    def center(self, t):
        s = self.amplitude * math.sin(TWO_PI * t / self.period_ + self.phase)
        return (self.cx + s * self.axis[0], self.cy + s * self.axis[1])

    def occupied(self, px, py, t):
        cx, cy = self.center(t)
        m = self.margin
        return (np.abs(np.asarray(px) - cx) <= self.half_x + m) & (
            np.abs(np.asarray(py) - cy) <= self.half_y + m
        )

    def bounding_circle(self, t):
        cx, cy = self.center(t)
        return (cx, cy, math.hypot(self.half_x, self.half_y) + self.margin * math.sqrt(2))

    def params(self):
        return {
            "center": [self.cx, self.cy],
            "half_size": [self.half_x, self.half_y],
            "axis": list(self.axis),
            "amplitude": self.amplitude,
            "period": self.period_,
            "phase": self.phase,
        }


@dataclass(frozen=True)
class MovingRectangle(Obstacle):
    """Rectangle with fixed heading following a piecewise-linear waypoint schedule.

    ``waypoints`` is a sequence of ``(t, x, y)`` with increasing ``t``; the
    center is held at the first/last waypoint outside the schedule.
    """

    kind: ClassVar[str] = "moving_rectangle"
    half_length: float = 0.07
    half_width: float = 0.04
    heading: float = 0.0
    waypoints: tuple[tuple[float, float, float], ...] = ((0.0, 0.0, 0.0),)

    def __post_init__(self):
        if not (self.half_length > 0 and self.half_width > 0):
            raise ValueError("rectangle half sizes must be positive")
        if not self.waypoints:
            raise ValueError("moving rectangle needs at least one waypoint")
        ts = [w[0] for w in self.waypoints]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("waypoint times must be strictly increasing")

    @property
    def is_static(self) -> bool:
        return len({(w[1], w[2]) for w in self.waypoints}) == 1

    def center(self, t):
        ts, xs, ys = np.asarray(self.waypoints, dtype=float).T
        return (float(np.interp(t, ts, xs)), float(np.interp(t, ts, ys)))

    def occupied(self, px, py, t):
        cx, cy = self.center(t)
        c, s = math.cos(self.heading), math.sin(self.heading)
        rx = np.asarray(px) - cx
        ry = np.asarray(py) - cy
        m = self.margin
        along = rx * c + ry * s
        across = -rx * s + ry * c
        return (np.abs(along) <= self.half_length + m) & (np.abs(across) <= self.half_width + m)

    def bounding_circle(self, t):
        cx, cy = self.center(t)
        return (cx, cy, math.hypot(self.half_length, self.half_width) + self.margin * math.sqrt(2))

    def params(self):
        return {
            "half_size": [self.half_length, self.half_width],
            "heading": self.heading,
            "waypoints": [list(w) for w in self.waypoints],
        }


OBSTACLE_KINDS = {
    cls.kind: cls
    for cls in (StaticDisk, StaticPolygon, RotatingAnnularSector, OscillatingBar, MovingRectangle)
}


# ---------------------------------------------------------------------------
# scene


@dataclass(frozen=True)
class Scene:
    domain: tuple[float, float, float, float] = (-1.0, 1.0, -1.0, 1.0)
    horizon: float = 10.0
    car: CarParams = field(default_factory=CarParams)
    target: Configuration = Configuration(0.0, 0.0, 0.0)
    obstacles: tuple[Obstacle, ...] = ()
    starts: tuple[Configuration, ...] = ()
    name: str = ""

    def __post_init__(self):
        x_min, x_max, y_min, y_max = self.domain
        if not (x_max > x_min and y_max > y_min):
            raise ValueError("empty domain")
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")

    @property
    def is_static(self) -> bool:
        return all(o.is_static for o in self.obstacles)

    def in_domain(self, px, py):
        x_min, x_max, y_min, y_max = self.domain
        px = np.asarray(px)
        py = np.asarray(py)
        return (px >= x_min) & (px <= x_max) & (py >= y_min) & (py <= y_max)

    def check_time(self, t: float) -> None:
        if not -1e-9 <= t <= self.horizon + 1e-9:
            raise ValueError(f"time {t} outside [0, {self.horizon}]")

    def to_dict(self) -> dict[str, Any]:
        car = self.car
        out = {
            "name": self.name,
            "domain": list(self.domain),
            "horizon": self.horizon,
            "car": {
                "d": car.d,
                "R": car.R,
                "W": car.W,
                "body": {"half_length": car.body_half_length, "half_width": car.body_half_width},
            },
            "target": {"x": self.target.x, "y": self.target.y, "theta": self.target.theta},
            "obstacles": [o.to_dict() for o in self.obstacles],
        }
        if self.starts:
            out["starts"] = [{"x": c.x, "y": c.y, "theta": c.theta} for c in self.starts]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def occupied(px, py, t: float, scene: Scene) -> np.ndarray:
    """Whether points lie inside any obstacle at time ``t``.

    Points outside the domain are never occupied.
    """
    scene.check_time(t)
    px = np.asarray(px, dtype=float)
    py = np.asarray(py, dtype=float)
    hit = np.zeros(np.broadcast(px, py).shape, dtype=bool)
    for obs in scene.obstacles:
        hit |= obs.occupied(px, py, t)
    return hit & scene.in_domain(px, py)


# ---------------------------------------------------------------------------
# footprint and collisions


def footprint(c, car: CarParams) -> np.ndarray:
    """Corners of the body rectangle at ``c`` as a (4, 2) array, counterclockwise from rear-right."""
    x, y, theta = c
    hl, hw = car.body_half_length, car.body_half_width
    local = np.array([[-hl, -hw], [hl, -hw], [hl, hw], [-hl, hw]])
    return _transform(local, x, y, theta)


def _transform(local, x, y, theta):
    cs, sn = math.cos(theta), math.sin(theta)
    rot = np.array([[cs, -sn], [sn, cs]])
    return local @ rot.T + np.array([x, y])


def body_samples(car: CarParams, spacing: float) -> np.ndarray:
    """Sample points of the body rectangle in the car frame.

    A lattice including the boundary with spacing at most ``spacing``; corners
    and the center are always present.
    """
    if not spacing > 0:
        raise ValueError("sample spacing must be positive")
    hl, hw = car.body_half_length, car.body_half_width
    nl = max(1, math.ceil(2 * hl / spacing)) + 1 if hl > 0 else 1
    nw = max(1, math.ceil(2 * hw / spacing)) + 1 if hw > 0 else 1
    u = np.linspace(-hl, hl, nl) if hl > 0 else np.zeros(1)
    v = np.linspace(-hw, hw, nw) if hw > 0 else np.zeros(1)
    uu, vv = np.meshgrid(u, v, indexing="ij")
    pts = np.column_stack([uu.ravel(), vv.ravel()])
    pts = np.vstack([[0.0, 0.0], pts])
    return np.unique(pts, axis=0)


DEFAULT_SPACING = 0.01


def collides_many(xs, ys, thetas, t: float, scene: Scene, car: CarParams, spacing: float = DEFAULT_SPACING):
    """Vectorized collision test for arrays of configurations at a single time."""
    xs, ys, thetas = np.broadcast_arrays(
        np.asarray(xs, dtype=float), np.asarray(ys, dtype=float), np.asarray(thetas, dtype=float)
    )
    scene.check_time(t)
    out = np.zeros(xs.shape, dtype=bool)
    if not scene.obstacles or xs.size == 0:
        return out
    samples = body_samples(car, spacing)
    reach = float(np.max(np.hypot(samples[:, 0], samples[:, 1])))
    fx, fy, ft = xs.ravel(), ys.ravel(), thetas.ravel()
    flat = out.ravel()
    for obs in scene.obstacles:
        ox, oy, orad = obs.bounding_circle(t)
        near = np.hypot(fx - ox, fy - oy) <= orad + reach + 1e-12
        near &= ~flat
        idx = np.nonzero(near)[0]
        if idx.size == 0:
            continue
        cx, cy = fx[idx], fy[idx]
        # the center is itself a sample point
        center_hit = obs.occupied(cx, cy, t) & scene.in_domain(cx, cy)
        flat[idx[center_hit]] = True
        # the obstacle dilated by the body reach contains every possible hit
        band = ~center_hit & replace(obs, margin=obs.margin + reach).occupied(cx, cy, t)
        idx = idx[band]
        if idx.size == 0:
            continue
        cs = np.cos(ft[idx])[:, None]
        sn = np.sin(ft[idx])[:, None]
        px = fx[idx, None] + samples[:, 0] * cs - samples[:, 1] * sn
        py = fy[idx, None] + samples[:, 0] * sn + samples[:, 1] * cs
        hit = obs.occupied(px, py, t) & scene.in_domain(px, py)
        flat[idx] |= hit.any(axis=1)
    return flat.reshape(xs.shape)


def collides(c, t: float, scene: Scene, car: CarParams, spacing: float = DEFAULT_SPACING) -> bool:
    """Whether the car body at configuration ``c`` overlaps an obstacle at time ``t``."""
    x, y, theta = c
    return bool(collides_many(np.array([x]), np.array([y]), np.array([theta]), t, scene, car, spacing)[0])


def illegal_mask(scene: Scene, grid, n: int, car: CarParams) -> np.ndarray:
    """Boolean field over ``(i, j, k)``: nodes whose car body collides at time ``t_n``."""
    if not 0 <= n <= grid.N:
        raise IndexError(f"time index {n} out of range [0, {grid.N}]")
    t = min(grid.time(n), scene.horizon)
    spacing = min(grid.dx, grid.dy) / 2
    X, Y, TH = np.meshgrid(grid.xs, grid.ys, grid.thetas, indexing="ij")
    return collides_many(X, Y, TH, t, scene, car, spacing)


# ---------------------------------------------------------------------------
# (de)serialization


def _req(d: dict, key: str, path: str):
    if not isinstance(d, dict):
        raise SceneSchemaError("expected an object", path)
    if key not in d:
        raise SceneSchemaError(f"missing required field '{key}'", f"{path}.{key}".lstrip("."))
    return d[key]


def _num(val, path: str) -> float:
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise SceneSchemaError(f"expected a number, got {val!r}", path)
    if not math.isfinite(val):
        raise SceneSchemaError("expected a finite number", path)
    return float(val)


def _vec(val, n: int, path: str) -> list[float]:
    if not isinstance(val, (list, tuple)) or len(val) != n:
        raise SceneSchemaError(f"expected a list of {n} numbers", path)
    return [_num(v, f"{path}[{i}]") for i, v in enumerate(val)]


def _config(d, path: str) -> Configuration:
    return Configuration.make(
        _num(_req(d, "x", path), f"{path}.x"),
        _num(_req(d, "y", path), f"{path}.y"),
        _num(_req(d, "theta", path), f"{path}.theta"),
    )


def _obstacle_from_dict(d, path: str) -> Obstacle:
    kind = _req(d, "kind", path)
    if kind not in OBSTACLE_KINDS:
        raise SceneSchemaError(f"unknown obstacle kind {kind!r}; expected one of {sorted(OBSTACLE_KINDS)}", f"{path}.kind")
    margin = _num(d.get("margin", 0.0), f"{path}.margin")

    def g(key):
        return _req(d, key, path)

    try:
        if kind == "static_disk":
            cx, cy = _vec(g("center"), 2, f"{path}.center")
            return StaticDisk(margin=margin, cx=cx, cy=cy, radius=_num(g("radius"), f"{path}.radius"))
        if kind == "static_polygon":
            verts = g("vertices")
            if not isinstance(verts, list):
                raise SceneSchemaError("expected a list of [x, y] pairs", f"{path}.vertices")
            return StaticPolygon(
                margin=margin,
                vertices=tuple(tuple(_vec(v, 2, f"{path}.vertices[{i}]")) for i, v in enumerate(verts)),
            )
        if kind == "rotating_annular_sector":
            cx, cy = _vec(d.get("center", [0.0, 0.0]), 2, f"{path}.center")
            return RotatingAnnularSector(
                margin=margin,
                cx=cx,
                cy=cy,
                r_in=_num(g("r_in"), f"{path}.r_in"),
                r_out=_num(g("r_out"), f"{path}.r_out"),
                start=_num(g("start"), f"{path}.start"),
                width=_num(g("width"), f"{path}.width"),
                omega=_num(g("omega"), f"{path}.omega"),
            )
        if kind == "oscillating_bar":
            cx, cy = _vec(g("center"), 2, f"{path}.center")
            hx, hy = _vec(g("half_size"), 2, f"{path}.half_size")
            return OscillatingBar(
                margin=margin,
                cx=cx,
                cy=cy,
                half_x=hx,
                half_y=hy,
                axis=tuple(_vec(d.get("axis", [0.0, 1.0]), 2, f"{path}.axis")),
                amplitude=_num(g("amplitude"), f"{path}.amplitude"),
                period_=_num(g("period"), f"{path}.period"),
                phase=_num(d.get("phase", 0.0), f"{path}.phase"),
            )
        hl, hw = _vec(g("half_size"), 2, f"{path}.half_size")
        wps = g("waypoints")
        if not isinstance(wps, list) or not wps:
            raise SceneSchemaError("expected a non-empty list of [t, x, y]", f"{path}.waypoints")
        return MovingRectangle(
            margin=margin,
            half_length=hl,
            half_width=hw,
            heading=_num(d.get("heading", 0.0), f"{path}.heading"),
            waypoints=tuple(tuple(_vec(w, 3, f"{path}.waypoints[{i}]")) for i, w in enumerate(wps)),
        )
    except SceneSchemaError:
        raise
    except ValueError as exc:
        raise SceneSchemaError(str(exc), path) from None


def scene_from_dict(doc: dict) -> Scene:
    if not isinstance(doc, dict):
        raise SceneSchemaError("scene document must be a JSON object")
    domain = _vec(_req(doc, "domain", ""), 4, "domain")
    horizon = _num(_req(doc, "horizon", ""), "horizon")
    car_d = _req(doc, "car", "")
    body = car_d.get("body", {}) if isinstance(car_d, dict) else {}
    try:
        car = CarParams(
            d=_num(_req(car_d, "d", "car"), "car.d"),
            R=_num(_req(car_d, "R", "car"), "car.R"),
            W=_num(_req(car_d, "W", "car"), "car.W"),
            body_half_length=_num(body["half_length"], "car.body.half_length") if "half_length" in body else None,
            body_half_width=_num(body["half_width"], "car.body.half_width") if "half_width" in body else None,
        )
    except ValueError as exc:
        if isinstance(exc, SceneSchemaError):
            raise
        raise SceneSchemaError(str(exc), "car") from None
    target = _config(_req(doc, "target", ""), "target")
    obs_list = doc.get("obstacles", [])
    if not isinstance(obs_list, list):
        raise SceneSchemaError("expected a list", "obstacles")
    obstacles = tuple(_obstacle_from_dict(o, f"obstacles[{i}]") for i, o in enumerate(obs_list))
    starts_list = doc.get("starts", [])
    if not isinstance(starts_list, list):
        raise SceneSchemaError("expected a list", "starts")
    starts = tuple(_config(s, f"starts[{i}]") for i, s in enumerate(starts_list))
    name = doc.get("name", "")
    try:
        return Scene(
            domain=tuple(domain),
            horizon=horizon,
            car=car,
            target=target,
            obstacles=obstacles,
            starts=starts,
            name=str(name),
        )
    except ValueError as exc:
        raise SceneSchemaError(str(exc)) from None


def loads_scene(text: str) -> Scene:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneSchemaError(exc.msg, line=exc.lineno) from None
    try:
        return scene_from_dict(doc)
    except SceneSchemaError as exc:
        line = _locate(text, exc.path)
        if line is None or exc.line is not None:
            raise
        raise SceneSchemaError(str(exc).split(": ", 1)[1], exc.path, line) from None


def _locate(text: str, path: str) -> int | None:
    """Best-effort line of the last named key in ``path`` (or its parent)."""
    if not path:
        return None
    keys = [k for k in path.replace("]", "").replace("[", ".").split(".") if k and not k.isdigit()]
    for key in reversed(keys):
        needle = f'"{key}"'
        pos = text.find(needle)
        if pos >= 0:
            return text.count("\n", 0, pos) + 1
    return None


def load_scene(path) -> Scene:
    with open(path, encoding="utf-8") as fh:
        return loads_scene(fh.read())


def save_scene(scene: Scene, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(scene.to_json() + "\n")
