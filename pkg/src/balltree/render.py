"""SVG figures of worlds, trees, balls and paths.

Output is plain text with fixed float formatting, so identical inputs give
byte-identical files. Worlds with more than two dimensions are drawn as
workspace projections and say so in the title.
"""
from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .environments import (
    OccupancyGrid2D,
    PlanarArmWorld,
    PolygonWorld2D,
    RigidRectangleWorld,
    Unsupported,
    forward_kinematics,
)

TREE_COLORS = ("#1f77b4", "#2ca02c")
DEFAULTS = dict(width=640, balls=True, edges=True, path=True, title=None)


def _f(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _pts(points) -> str:
    return " ".join(f"{_f(x)},{_f(y)}" for x, y in points)


class _Canvas:
    def __init__(self, x0, y0, x1, y1, width):
        self.x0, self.y0, self.x1, self.y1 = x0, y0, x1, y1
        self.width = width
        self.height = max(1, int(round(width * (y1 - y0) / (x1 - x0))))
        self.unit = (x1 - x0) / width  # world units per pixel
        self.items: list[str] = []

    def add(self, s: str):
        self.items.append(s)

    def document(self, title: str) -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
            f'viewBox="{_f(self.x0)} {_f(-self.y1)} {_f(self.x1 - self.x0)} {_f(self.y1 - self.y0)}">\n'
            f"<title>{escape(title)}</title>\n"
            f'<rect x="{_f(self.x0)}" y="{_f(-self.y1)}" width="{_f(self.x1 - self.x0)}" '
            f'height="{_f(self.y1 - self.y0)}" fill="white"/>\n'
            '<g transform="scale(1,-1)">\n'
        )
        return head + "\n".join(self.items) + "\n</g>\n</svg>\n"


def _draw_polygons(cv: _Canvas, polygons):
    for p in polygons:
        cv.add(f'<polygon points="{_pts(p)}" fill="#555" stroke="none"/>')


def _draw_grid(cv: _Canvas, env: OccupancyGrid2D):
    cs = env.cell_size
    ox, oy = env.origin
    occ = env.occupancy
    for j in range(occ.shape[0]):
        row = occ[j]
        i = 0
        w = row.shape[0]
        while i < w:
            if not row[i]:
                i += 1
                continue
            k = i
            while k < w and row[k]:
                k += 1
            cv.add(f'<rect x="{_f(ox + i * cs)}" y="{_f(oy + j * cs)}" width="{_f((k - i) * cs)}" '
                   f'height="{_f(cs)}" fill="#555"/>')
            i = k


def _rect_outline(env: RigidRectangleWorld, q, color, sw):
    return f'<polygon points="{_pts(env.corners(q))}" fill="none" stroke="{color}" stroke-width="{_f(sw)}"/>'


def _arm_polyline(env: PlanarArmWorld, q, color, sw):
    return f'<polyline points="{_pts(forward_kinematics(env, q))}" fill="none" stroke="{color}" stroke-width="{_f(sw)}"/>'


def render_svg(scenario, trees=(), path=None, options: dict | None = None) -> str:
    """Draw ``scenario`` with optional ball trees and solution path."""
    opt = dict(DEFAULTS)
    opt.update(options or {})
    env = scenario.env
    if isinstance(env, PlanarArmWorld):
        reach = float(env.link_lengths.sum())
        bx, by = env.base
        extents = (bx - reach, by - reach, bx + reach, by + reach)
        project = lambda q: forward_kinematics(env, q)[-1]  # noqa: E731
        proj_note = "end-effector projection of a {}-D tree".format(env.dim)
        draw_balls = False
    elif isinstance(env, (PolygonWorld2D, OccupancyGrid2D, RigidRectangleWorld)):
        lo, hi = env.bounds.lower, env.bounds.upper
        extents = (lo[0], lo[1], hi[0], hi[1])
        project = lambda q: np.asarray(q)[:2]  # noqa: E731
        proj_note = "x-y projection of 3-D balls at each node's heading" if env.dim == 3 else ""
        draw_balls = True
    else:
        raise Unsupported(f"no SVG projection for {getattr(env, 'kind', type(env).__name__)}")

    cv = _Canvas(*extents, opt["width"])
    sw = 1.2 * cv.unit
    if isinstance(env, OccupancyGrid2D):
        _draw_grid(cv, env)
    else:
        _draw_polygons(cv, env.obstacles)
    if isinstance(env, PlanarArmWorld):
        for x, y, r in env.circles:
            cv.add(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{_f(r)}" fill="#555"/>')

    for k, tree in enumerate(trees):
        color = TREE_COLORS[k % len(TREE_COLORS)]
        centers = tree.centers
        pts = np.array([project(c) for c in centers]) if len(centers) else np.zeros((0, 2))
        if opt["balls"] and draw_balls:
            for (x, y), r in zip(pts, tree.radii):
                if r > 0:
                    cv.add(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{_f(r)}" fill="{color}" fill-opacity="0.12" '
                           f'stroke="{color}" stroke-width="{_f(0.5 * sw)}"/>')
        if opt["edges"]:
            for i, p in enumerate(tree.parents):
                if p >= 0:
                    (x0, y0), (x1, y1) = pts[p], pts[i]
                    cv.add(f'<line x1="{_f(x0)}" y1="{_f(y0)}" x2="{_f(x1)}" y2="{_f(y1)}" '
                           f'stroke="{color}" stroke-width="{_f(0.8 * sw)}"/>')
        for x, y in pts:
            cv.add(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{_f(1.5 * sw)}" fill="{color}"/>')

    if opt["path"] and path is not None and len(path):
        ppts = np.array([project(q) for q in path])
        cv.add(f'<polyline points="{_pts(ppts)}" fill="none" stroke="#d62728" stroke-width="{_f(2.5 * sw)}"/>')

    for q, color in ((scenario.start, "#ff7f0e"), (scenario.goal, "#9467bd")):
        x, y = project(q)
        cv.add(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{_f(4 * sw)}" fill="{color}"/>')
        if isinstance(env, RigidRectangleWorld):
            cv.add(_rect_outline(env, q, color, 1.5 * sw))
        elif isinstance(env, PlanarArmWorld):
            cv.add(_arm_polyline(env, q, color, 2 * sw))

    title = opt["title"] or scenario.name
    if proj_note:
        title = f"{title} ({proj_note})"
    return cv.document(title)
