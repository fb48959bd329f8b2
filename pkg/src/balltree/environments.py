"""Collision worlds: point robot among polygons, rigid rectangle, planar arm,
and occupancy grid.

Every world answers ``is_collision``, batched ``collide``/``first_collision``
over probe arrays, ``validate_segment`` and, where a conservative bound is
available, ``clearance``. Configurations outside the bounds always collide.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import ndimage

from . import kernels
from .cspace import Bounds, InvalidArgument, as_config


class Unsupported(RuntimeError):
    """Raised when an operation needs a capability the world lacks."""


class Status(str, enum.Enum):
    FREE = "Free"
    BLOCKED = "Blocked"


@dataclass
class SegmentResult:
    status: Status
    last_free: np.ndarray
    collision_dist: float | None = None
    collision_point: np.ndarray | None = None
    # a, every free probe, ending at last_free
    polyline: np.ndarray = field(default=None, repr=False)
    checks: int = 0

    @property
    def free(self) -> bool:
        return self.status is Status.FREE


# bisection levels used to certify the gap between two free probes
CERTIFY_DEPTH = 8


def probe_params(length: float, resolution: float) -> np.ndarray:
    """Arc-length fractions of the probes on a segment, ending at 1.

    Probes sit at whole multiples of ``resolution`` from the start, so the
    first probe is one full step out (or the endpoint, if closer).
    """
    if length <= 0.0:
        return np.ones(1)
    n = int(math.ceil(length / resolution))
    t = np.arange(1, n, dtype=np.float64) * (resolution / length)
    t = t[t < 1.0 - 1e-12]
    return np.append(t, 1.0)


# --- polygon helpers ---------------------------------------------------------

def _signed_area(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _segments_cross(p, q, r, s) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    o1, o2 = orient(p, q, r), orient(p, q, s)
    o3, o4 = orient(r, s, p), orient(r, s, q)
    return o1 * o2 < 0 and o3 * o4 < 0


def normalize_polygon(vertices) -> np.ndarray:
    """Validate a simple polygon and return its vertices counterclockwise."""
    v = np.asarray(vertices, dtype=np.float64)
    if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
        raise InvalidArgument("polygon needs at least 3 (x, y) vertices")
    if not np.all(np.isfinite(v)):
        raise InvalidArgument("polygon has non-finite vertices")
    n = v.shape[0]
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            if _segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]):
                raise InvalidArgument("polygon is self-intersecting")
    area = _signed_area(v)
    if area == 0.0:
        raise InvalidArgument("polygon has zero area")
    return v if area > 0 else v[::-1].copy()


def box(x0, y0, x1, y1) -> np.ndarray:
    return np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]], dtype=np.float64)


class EdgeSet:
    """Flat edge arrays for a polygon list, in the layout the kernels expect."""

    def __init__(self, polygons):
        self.polygons = [normalize_polygon(p) for p in polygons]
        if self.polygons:
            a = np.concatenate(self.polygons)
            b = np.concatenate([np.roll(p, -1, axis=0) for p in self.polygons])
            counts = [len(p) for p in self.polygons]
        else:
            a = b = np.zeros((0, 2))
            counts = []
        self.ax = np.ascontiguousarray(a[:, 0])
        self.ay = np.ascontiguousarray(a[:, 1])
        self.bx = np.ascontiguousarray(b[:, 0])
        self.by = np.ascontiguousarray(b[:, 1])
        self.poly_start = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)

    @property
    def args(self):
        return self.ax, self.ay, self.bx, self.by, self.poly_start


# --- worlds ------------------------------------------------------------------

class Environment:
    kind = "abstract"
    has_clearance = False

    def __init__(self, bounds: Bounds):
        self.bounds = bounds

    @property
    def dim(self) -> int:
        return self.bounds.dim

    def _check_dim(self, q) -> np.ndarray:
        q = np.asarray(q, dtype=np.float64)
        if q.ndim != 1 or q.shape[0] != self.dim:
            raise InvalidArgument(f"config has shape {q.shape}, world dimension is {self.dim}")
        return q

    # kernels on in-bounds probe batches
    def _collide(self, qs: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _first_hit(self, qs: np.ndarray) -> int:
        raise NotImplementedError

    def is_collision(self, q) -> bool:
        q = self._check_dim(q)
        if not np.all(np.isfinite(q)) or not self.bounds.contains(q):
            return True
        return bool(self._collide(q.reshape(1, -1))[0])

    def collide(self, qs) -> np.ndarray:
        qs = np.ascontiguousarray(qs, dtype=np.float64)
        inb = self.bounds.contains_all(qs)
        out = ~inb
        if inb.any():
            out[inb] = self._collide(np.ascontiguousarray(qs[inb]))
        return out

    def first_collision(self, qs) -> int:
        """Index of the first colliding config in ``qs``, or -1."""
        qs = np.ascontiguousarray(qs, dtype=np.float64)
        inb = self.bounds.contains_all(qs)
        stop = qs.shape[0] if inb.all() else int(np.argmin(inb))
        hit = self._first_hit(qs[:stop]) if stop else -1
        if hit >= 0:
            return hit
        return -1 if stop == qs.shape[0] else stop

    def _clearance(self, q: np.ndarray) -> float:
        raise Unsupported(f"{self.kind} has no clearance oracle")

    def clearance(self, q) -> float | None:
        """Conservative C-space clearance (L2), or None when unavailable."""
        q = self._check_dim(q)
        if not self.has_clearance:
            return None
        if self.is_collision(q):
            raise InvalidArgument("clearance queried at a colliding configuration")
        return max(0.0, min(self._clearance(q), self.bounds.margin(q)))

    def _clearances(self, qs: np.ndarray) -> np.ndarray | None:
        """Raw conservative clearances of free in-bounds configs, or None."""
        return None

    def _certify(self, a, d, length, t, clear):
        """Bisect probe gaps whose clearance balls do not overlap.

        ``t`` holds the arc fractions of consecutive free configs (starting
        at 0) and ``clear`` their clearances. Returns the smallest fraction
        found in collision (``inf`` if none) and the number of extra checks.
        """
        h = np.diff(t) * length
        open_ = clear[:-1] + clear[1:] < h
        s0, s1 = t[:-1][open_], t[1:][open_]
        c0, c1 = clear[:-1][open_], clear[1:][open_]
        best, checks = math.inf, 0
        for _ in range(CERTIFY_DEPTH):
            keep = s0 < best
            s0, s1, c0, c1 = s0[keep], s1[keep], c0[keep], c1[keep]
            if s0.size == 0:
                break
            mid = 0.5 * (s0 + s1)
            hit = self.collide(a + mid[:, None] * d)
            checks += mid.size
            if hit.any():
                best = min(best, float(mid[hit].min()))
            s0, s1, c0, c1, mid = s0[~hit], s1[~hit], c0[~hit], c1[~hit], mid[~hit]
            cm = self._clearances(a + mid[:, None] * d)
            half = 0.5 * (s1 - s0) * length
            left = c0 + cm < half
            right = cm + c1 < half
            s0, s1, c0, c1 = (
                np.concatenate([s0[left], mid[right]]),
                np.concatenate([mid[left], s1[right]]),
                np.concatenate([c0[left], cm[right]]),
                np.concatenate([cm[left], c1[right]]),
            )
        return best, checks

    def validate_segment(self, a, b, resolution: float) -> SegmentResult:
        a = self._check_dim(a)
        b = self._check_dim(b)
        if not resolution > 0:
            raise InvalidArgument("resolution must be positive")
        if self.is_collision(a):
            raise InvalidArgument("segment start is in collision")
        d = b - a
        length = math.sqrt(float(d @ d))
        t = probe_params(length, resolution)
        probes = a + t[:, None] * d
        probes[-1] = b
        hit = self.first_collision(probes)
        stop = len(probes) if hit < 0 else hit
        checks = stop if hit < 0 else hit + 1
        free = np.vstack([a, probes[:stop]])
        tf = np.concatenate([[0.0], t[:stop]])
        clear = self._clearances(free) if stop else None
        if clear is not None:
            best, extra = self._certify(a, d, length, tf, clear)
            checks += extra
            if best < math.inf:
                keep = tf < best
                return SegmentResult(
                    Status.BLOCKED,
                    free[keep][-1].copy(),
                    collision_dist=best * length,
                    collision_point=a + best * d,
                    polyline=free[keep],
                    checks=checks,
                )
        if hit < 0:
            return SegmentResult(Status.FREE, b.copy(), polyline=free, checks=checks)
        return SegmentResult(
            Status.BLOCKED,
            free[-1].copy(),
            collision_dist=float(t[hit] * length),
            collision_point=probes[hit].copy(),
            polyline=free,
            checks=checks,
        )

    def to_dict(self) -> dict:
        raise NotImplementedError


class PolygonWorld2D(Environment):
    """Point robot among simple polygons."""

    kind = "polygon_world"
    has_clearance = True

    def __init__(self, bounds: Bounds, obstacles=()):
        super().__init__(bounds)
        if bounds.dim != 2:
            raise InvalidArgument("polygon world is two-dimensional")
        self.edges = EdgeSet(obstacles)

    @property
    def obstacles(self):
        return self.edges.polygons

    def _collide(self, qs):
        return kernels.points_collide(qs, *self.edges.args)

    def _first_hit(self, qs):
        return kernels.first_point_hit(qs, *self.edges.args)

    def _clearance(self, q):
        return float(kernels.point_clearance(q[0], q[1], *self.edges.args))

    def _clearances(self, qs):
        return kernels.points_clearance(np.ascontiguousarray(qs), *self.edges.args)

    def to_dict(self):
        return {"kind": self.kind, "obstacles": [p.tolist() for p in self.obstacles]}


class RigidRectangleWorld(Environment):
    """Rectangle robot with config (x, y, theta) among simple polygons."""

    kind = "rigid_rectangle"
    has_clearance = True

    def __init__(self, bounds: Bounds, half_extents, obstacles=()):
        super().__init__(bounds)
        if bounds.dim != 3:
            raise InvalidArgument("rectangle world is three-dimensional (x, y, theta)")
        hx, hy = (float(v) for v in half_extents)
        if not (hx > 0 and hy > 0):
            raise InvalidArgument("rectangle half-extents must be positive")
        if bounds.lower[2] < -math.pi - 1e-12 or bounds.upper[2] > math.pi + 1e-12:
            raise InvalidArgument("theta bounds must lie within [-pi, pi]")
        self.hx, self.hy = hx, hy
        self.edges = EdgeSet(obstacles)
        self.circumradius = math.hypot(hx, hy)
        # body points move at most sqrt(|dp|^2 + rho^2 dtheta^2) <= lip * |dq|
        self.lipschitz = math.sqrt(1.0 + self.circumradius**2)

    @property
    def obstacles(self):
        return self.edges.polygons

    def corners(self, q) -> np.ndarray:
        c, s = math.cos(q[2]), math.sin(q[2])
        local = np.array([[self.hx, self.hy], [-self.hx, self.hy], [-self.hx, -self.hy], [self.hx, -self.hy]])
        return q[:2] + local @ np.array([[c, s], [-s, c]])

    def _collide(self, qs):
        return kernels.rects_collide(qs, self.hx, self.hy, *self.edges.args)

    def _first_hit(self, qs):
        return kernels.first_rect_hit(qs, self.hx, self.hy, *self.edges.args)

    def workspace_clearance(self, q) -> float:
        return float(kernels.rect_clearance(np.ascontiguousarray(q), self.hx, self.hy, *self.edges.args))

    def _clearance(self, q):
        return self.workspace_clearance(q) / self.lipschitz

    def _clearances(self, qs):
        return kernels.rects_clearance(np.ascontiguousarray(qs), self.hx, self.hy, *self.edges.args) / self.lipschitz

    def to_dict(self):
        return {
            "kind": self.kind,
            "half_extents": [self.hx, self.hy],
            "obstacles": [p.tolist() for p in self.obstacles],
        }


class PlanarArmWorld(Environment):
    """Serial planar arm with revolute joints; links are line segments."""

    kind = "planar_arm"
    has_clearance = True

    def __init__(self, bounds: Bounds, link_lengths, base=(0.0, 0.0), obstacles=(), circles=()):
        super().__init__(bounds)
        self.link_lengths = np.asarray(link_lengths, dtype=np.float64)
        if self.link_lengths.ndim != 1 or self.link_lengths.size < 1 or np.any(self.link_lengths <= 0):
            raise InvalidArgument("link lengths must be a non-empty list of positive reals")
        if bounds.dim != self.link_lengths.size:
            raise InvalidArgument("bounds dimension must equal the number of links")
        if np.any(bounds.lower < -math.pi - 1e-12) or np.any(bounds.upper > math.pi + 1e-12):
            raise InvalidArgument("joint bounds must lie within [-pi, pi]")
        self.base = np.asarray(base, dtype=np.float64).reshape(2)
        self.edges = EdgeSet(obstacles)
        c = np.asarray(circles, dtype=np.float64).reshape(-1, 3)
        if np.any(c[:, 2] <= 0):
            raise InvalidArgument("circle radii must be positive")
        self.circles = np.ascontiguousarray(c)
        # joint i moves everything distal to it by at most reach_i * |dq_i|,
        # and |dq_i| <= |dq|_2, so the sum of reaches bounds the displacement
        self.reach = np.cumsum(self.link_lengths[::-1])[::-1]
        self.lipschitz = float(self.reach.sum())

    @property
    def obstacles(self):
        return self.edges.polygons

    @property
    def _args(self):
        return (self.link_lengths, self.base[0], self.base[1], self.circles, *self.edges.args)

    def _collide(self, qs):
        return kernels.arms_collide(qs, *self._args)

    def _first_hit(self, qs):
        return kernels.first_arm_hit(qs, *self._args)

    def workspace_clearance(self, q) -> float:
        return float(kernels.arm_clearance(np.ascontiguousarray(q), *self._args))

    def _clearance(self, q):
        return self.workspace_clearance(q) / self.lipschitz

    def _clearances(self, qs):
        return kernels.arms_clearance(np.ascontiguousarray(qs), *self._args) / self.lipschitz

    def to_dict(self):
        return {
            "kind": self.kind,
            "link_lengths": self.link_lengths.tolist(),
            "base": self.base.tolist(),
            "obstacles": [p.tolist() for p in self.obstacles],
            "circles": self.circles.tolist(),
        }


def forward_kinematics(world: PlanarArmWorld, q) -> np.ndarray:
    """Joint positions, base first, end effector last: shape (n + 1, 2)."""
    q = world._check_dim(q)
    xs, ys = kernels.arm_joints(q.reshape(1, -1), world.link_lengths, world.base[0], world.base[1])
    return np.stack([xs[0], ys[0]], axis=1)


class OccupancyGrid2D(Environment):
    """Point robot on a boolean raster; ``occupancy[j, i]`` is the cell at
    column ``i`` and row ``j`` counted upward from ``origin``."""

    kind = "occupancy_grid"
    has_clearance = True

    def __init__(self, bounds: Bounds, occupancy, cell_size: float, origin=(0.0, 0.0), source: dict | None = None):
        super().__init__(bounds)
        if bounds.dim != 2:
            raise InvalidArgument("occupancy grid is two-dimensional")
        occ = np.ascontiguousarray(np.asarray(occupancy, dtype=np.bool_))
        if occ.ndim != 2 or occ.shape[0] < 1 or occ.shape[1] < 1:
            raise InvalidArgument("occupancy raster must be a non-empty 2D array")
        if not cell_size > 0:
            raise InvalidArgument("cell_size must be positive")
        self.occupancy = occ
        self.cell_size = float(cell_size)
        self.origin = np.asarray(origin, dtype=np.float64).reshape(2)
        self.source = source
        # pad so that outside-the-raster counts as an obstacle for the transform
        padded = np.pad(~occ, 1, constant_values=False)
        self._edt = ndimage.distance_transform_edt(padded)[1:-1, 1:-1] * self.cell_size

    @property
    def extent(self):
        h, w = self.occupancy.shape
        return self.origin[0], self.origin[1], self.origin[0] + w * self.cell_size, self.origin[1] + h * self.cell_size

    def _collide(self, qs):
        return kernels.grid_collide(qs, self.occupancy, self.origin[0], self.origin[1], self.cell_size)

    def _first_hit(self, qs):
        return kernels.first_grid_hit(qs, self.occupancy, self.origin[0], self.origin[1], self.cell_size)

    def _clearance(self, q):
        i = int(math.floor((q[0] - self.origin[0]) / self.cell_size))
        j = int(math.floor((q[1] - self.origin[1]) / self.cell_size))
        # centre-to-centre distance loses at most half a cell diagonal at each end
        return float(self._edt[j, i]) - math.sqrt(2.0) * self.cell_size

    def _clearances(self, qs):
        h, w = self.occupancy.shape
        i = np.clip(np.floor((qs[:, 0] - self.origin[0]) / self.cell_size).astype(np.int64), 0, w - 1)
        j = np.clip(np.floor((qs[:, 1] - self.origin[1]) / self.cell_size).astype(np.int64), 0, h - 1)
        return np.maximum(0.0, self._edt[j, i] - math.sqrt(2.0) * self.cell_size)

    def to_dict(self):
        if self.source is not None:
            return dict(self.source)
        return {
            "kind": self.kind,
            "cell_size": self.cell_size,
            "origin": self.origin.tolist(),
            "raster": raster_to_rows(self.occupancy),
        }


# --- rasters -----------------------------------------------------------------

def rows_to_raster(rows) -> np.ndarray:
    """Text rows ('#' occupied, anything else free), top row first."""
    if not rows:
        raise InvalidArgument("raster has no rows")
    width = len(rows[0])
    if width == 0 or any(len(r) != width for r in rows):
        raise InvalidArgument("raster rows must be non-empty and equal length")
    img = np.array([[c == "#" for c in r] for r in rows], dtype=np.bool_)
    return np.flipud(img).copy()


def raster_to_rows(occ: np.ndarray) -> list[str]:
    return ["".join("#" if v else "." for v in row) for row in np.flipud(occ)]


def _pgm_tokens(data: bytes, count: int, pos: int):
    out = []
    n = len(data)
    while len(out) < count:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos < n and data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise InvalidArgument("truncated PGM header")
        out.append(data[start:pos])
    return out, pos


def read_pgm(path) -> np.ndarray:
    """Load a P2/P5 PGM as occupancy: pixels darker than 50% gray are occupied.

    The returned raster has row 0 at the bottom of the image.
    """
    data = Path(path).read_bytes()
    (magic, w, h, maxval), pos = _pgm_tokens(data, 4, 0)
    w, h, maxval = int(w), int(h), int(maxval)
    if w <= 0 or h <= 0 or not 0 < maxval < 65536:
        raise InvalidArgument(f"bad PGM dimensions in {path}")
    if magic == b"P5":
        pos += 1
        dtype = np.dtype(">u2") if maxval > 255 else np.uint8
        img = np.frombuffer(data, dtype=dtype, count=w * h, offset=pos)
    elif magic == b"P2":
        vals, _ = _pgm_tokens(data, w * h, pos)
        img = np.array([int(v) for v in vals])
    else:
        raise InvalidArgument(f"{path} is not a P2/P5 PGM file")
    img = img.reshape(h, w).astype(np.float64)
    return np.flipud(img < 0.5 * maxval).copy()


def write_pgm(path, occ: np.ndarray) -> None:
    """Write occupancy as binary P5 (occupied black, free white)."""
    img = np.where(np.flipud(occ), 0, 255).astype(np.uint8)
    h, w = img.shape
    Path(path).write_bytes(f"P5\n{w} {h}\n255\n".encode() + img.tobytes())


def synthetic_urban_grid(seed: int = 0, blocks: int = 8, block_cells: int = 16, street_cells: int = 5,
                         noise: float = 0.002) -> np.ndarray:
    """City-block raster with streets, irregular buildings and speckle noise.

    Streets between block rows are always open, so every street cell is
    connected. Buildings fill each block with random set-backs and courtyard
    notches; isolated occupied pixels imitate spurious scan returns.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    pitch = block_cells + street_cells
    size = blocks * pitch + street_cells
    occ = np.zeros((size, size), dtype=np.bool_)
    for bj in range(blocks):
        for bi in range(blocks):
            x0 = street_cells + bi * pitch
            y0 = street_cells + bj * pitch
            if rng.random() < 0.12:
                continue  # park / plaza
            sx0, sy0, sx1, sy1 = rng.integers(0, 3, size=4)
            occ[y0 + sy0:y0 + block_cells - sy1, x0 + sx0:x0 + block_cells - sx1] = True
            if rng.random() < 0.5:
                cw, ch = rng.integers(3, block_cells // 2, size=2)
                cx = x0 + rng.integers(3, block_cells - cw - 2)
                cy = y0 + rng.integers(3, block_cells - ch - 2)
                occ[cy:cy + ch, cx:cx + cw] = False
    speck = rng.random(occ.shape) < noise
    occ |= speck
    return occ


# --- dict (de)serialisation --------------------------------------------------

def environment_from_dict(spec: dict, bounds: Bounds, base_dir: Path | None = None) -> Environment:
    kind = spec.get("kind")
    if kind == PolygonWorld2D.kind:
        return PolygonWorld2D(bounds, spec.get("obstacles", []))
    if kind == RigidRectangleWorld.kind:
        return RigidRectangleWorld(bounds, spec["half_extents"], spec.get("obstacles", []))
    if kind == PlanarArmWorld.kind:
        return PlanarArmWorld(bounds, spec["link_lengths"], spec.get("base", (0.0, 0.0)),
                              spec.get("obstacles", []), spec.get("circles", []))
    if kind == OccupancyGrid2D.kind:
        if "raster" in spec:
            occ = rows_to_raster(spec["raster"])
            source = None
        elif "pgm" in spec:
            p = Path(spec["pgm"])
            if not p.is_absolute() and base_dir is not None:
                p = base_dir / p
            occ = read_pgm(p)
            source = dict(spec)
        else:
            raise InvalidArgument("occupancy grid needs 'raster' or 'pgm'")
        return OccupancyGrid2D(bounds, occ, spec["cell_size"], spec.get("origin", (0.0, 0.0)), source=source)
    raise InvalidArgument(f"unknown environment kind {kind!r}")


__all__ = [
    "Environment", "PolygonWorld2D", "RigidRectangleWorld", "PlanarArmWorld", "OccupancyGrid2D",
    "SegmentResult", "Status", "InvalidArgument", "Unsupported", "forward_kinematics",
    "environment_from_dict", "read_pgm", "write_pgm", "synthetic_urban_grid", "box", "as_config",
]
