"""Numba kernels, one-to-one with ``_kernels_np``.

The scalar loops exit at the first collision, which is where most of the time
goes on long uncapped extensions.
"""
import math

import numpy as np
from numba import njit

_opts = dict(cache=True, nogil=True)


@njit(**_opts)
def nearest_volume(centers, radii, x, linf):
    n, dim = centers.shape
    best = 0
    best_score = np.inf
    for i in range(n):
        d = 0.0
        if linf:
            for k in range(dim):
                g = abs(centers[i, k] - x[k])
                if g > d:
                    d = g
        else:
            for k in range(dim):
                g = centers[i, k] - x[k]
                d += g * g
            d = math.sqrt(d)
        s = d - radii[i]
        if s < best_score:
            best_score = s
            best = i
    return best, best_score


@njit(**_opts)
def _pt_seg(px, py, ax, ay, bx, by):
    dx = bx - ax
    dy = by - ay
    den = dx * dx + dy * dy
    t = 0.0
    if den > 0.0:
        t = ((px - ax) * dx + (py - ay) * dy) / den
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
    ex = ax + t * dx - px
    ey = ay + t * dy - py
    return math.sqrt(ex * ex + ey * ey)


@njit(**_opts)
def _seg_seg(p0x, p0y, p1x, p1y, ax, ay, bx, by):
    o1 = (bx - ax) * (p0y - ay) - (by - ay) * (p0x - ax)
    o2 = (bx - ax) * (p1y - ay) - (by - ay) * (p1x - ax)
    o3 = (p1x - p0x) * (ay - p0y) - (p1y - p0y) * (ax - p0x)
    o4 = (p1x - p0x) * (by - p0y) - (p1y - p0y) * (bx - p0x)
    if o1 * o2 < 0.0 and o3 * o4 < 0.0:
        return 0.0
    d = _pt_seg(p0x, p0y, ax, ay, bx, by)
    d = min(d, _pt_seg(p1x, p1y, ax, ay, bx, by))
    d = min(d, _pt_seg(ax, ay, p0x, p0y, p1x, p1y))
    d = min(d, _pt_seg(bx, by, p0x, p0y, p1x, p1y))
    return d


@njit(**_opts)
def _inside_one(px, py, ax, ay, bx, by, poly_start):
    for p in range(poly_start.shape[0] - 1):
        c = 0
        for e in range(poly_start[p], poly_start[p + 1]):
            if (ay[e] > py) != (by[e] > py):
                xi = ax[e] + (py - ay[e]) * (bx[e] - ax[e]) / (by[e] - ay[e])
                if px < xi:
                    c += 1
        if c % 2 == 1:
            return True
    return False


@njit(**_opts)
def points_collide(pts, ax, ay, bx, by, poly_start):
    m = pts.shape[0]
    out = np.zeros(m, dtype=np.bool_)
    for i in range(m):
        out[i] = _inside_one(pts[i, 0], pts[i, 1], ax, ay, bx, by, poly_start)
    return out


@njit(**_opts)
def first_point_hit(pts, ax, ay, bx, by, poly_start):
    for i in range(pts.shape[0]):
        if _inside_one(pts[i, 0], pts[i, 1], ax, ay, bx, by, poly_start):
            return i
    return -1


@njit(**_opts)
def point_clearance(px, py, ax, ay, bx, by, poly_start):
    if ax.shape[0] == 0:
        return np.inf
    if _inside_one(px, py, ax, ay, bx, by, poly_start):
        return 0.0
    d = np.inf
    for e in range(ax.shape[0]):
        d = min(d, _pt_seg(px, py, ax[e], ay[e], bx[e], by[e]))
    return d


@njit(**_opts)
def points_clearance(pts, ax, ay, bx, by, poly_start):
    out = np.empty(pts.shape[0])
    for i in range(pts.shape[0]):
        out[i] = point_clearance(pts[i, 0], pts[i, 1], ax, ay, bx, by, poly_start)
    return out


@njit(**_opts)
def _rect_gap(x, y, th, hx, hy, ax, ay, bx, by, poly_start, early):
    """Min edge-edge distance; 0 on overlap. ``early`` stops at first contact."""
    if ax.shape[0] == 0:
        return np.inf
    c = math.cos(th)
    s = math.sin(th)
    lx = (hx, -hx, -hx, hx)
    ly = (hy, hy, -hy, -hy)
    cx = np.empty(4)
    cy = np.empty(4)
    for k in range(4):
        cx[k] = x + c * lx[k] - s * ly[k]
        cy[k] = y + s * lx[k] + c * ly[k]
    if _inside_one(x, y, ax, ay, bx, by, poly_start):
        return 0.0
    for p in range(poly_start.shape[0] - 1):
        e = poly_start[p]
        dx = ax[e] - x
        dy = ay[e] - y
        u = c * dx + s * dy
        v = -s * dx + c * dy
        if abs(u) <= hx and abs(v) <= hy:
            return 0.0
    best = np.inf
    for k in range(4):
        k2 = (k + 1) % 4
        for e in range(ax.shape[0]):
            d = _seg_seg(cx[k], cy[k], cx[k2], cy[k2], ax[e], ay[e], bx[e], by[e])
            if d < best:
                best = d
                if early and best <= 1e-12:
                    return 0.0
    if best <= 1e-12:
        return 0.0
    return best


@njit(**_opts)
def rects_collide(poses, hx, hy, ax, ay, bx, by, poly_start):
    m = poses.shape[0]
    out = np.zeros(m, dtype=np.bool_)
    for i in range(m):
        out[i] = _rect_gap(poses[i, 0], poses[i, 1], poses[i, 2], hx, hy, ax, ay, bx, by, poly_start, True) <= 0.0
    return out


@njit(**_opts)
def first_rect_hit(poses, hx, hy, ax, ay, bx, by, poly_start):
    for i in range(poses.shape[0]):
        if _rect_gap(poses[i, 0], poses[i, 1], poses[i, 2], hx, hy, ax, ay, bx, by, poly_start, True) <= 0.0:
            return i
    return -1


@njit(**_opts)
def rect_clearance(pose, hx, hy, ax, ay, bx, by, poly_start):
    return _rect_gap(pose[0], pose[1], pose[2], hx, hy, ax, ay, bx, by, poly_start, False)


@njit(**_opts)
def rects_clearance(poses, hx, hy, ax, ay, bx, by, poly_start):
    out = np.empty(poses.shape[0])
    for i in range(poses.shape[0]):
        out[i] = _rect_gap(poses[i, 0], poses[i, 1], poses[i, 2], hx, hy, ax, ay, bx, by, poly_start, False)
    return out


@njit(**_opts)
def arm_joints(qs, lengths, base_x, base_y):
    m, n = qs.shape
    xs = np.empty((m, n + 1))
    ys = np.empty((m, n + 1))
    for i in range(m):
        xs[i, 0] = base_x
        ys[i, 0] = base_y
        a = 0.0
        for j in range(n):
            a += qs[i, j]
            xs[i, j + 1] = xs[i, j] + lengths[j] * math.cos(a)
            ys[i, j + 1] = ys[i, j] + lengths[j] * math.sin(a)
    return xs, ys


@njit(**_opts)
def _arm_gap(q, lengths, base_x, base_y, circles, ax, ay, bx, by, poly_start, early):
    n = q.shape[0]
    gap = np.inf
    x0 = base_x
    y0 = base_y
    a = 0.0
    for j in range(n):
        if ax.shape[0] and _inside_one(x0, y0, ax, ay, bx, by, poly_start):
            return 0.0
        a += q[j]
        x1 = x0 + lengths[j] * math.cos(a)
        y1 = y0 + lengths[j] * math.sin(a)
        for c in range(circles.shape[0]):
            d = _pt_seg(circles[c, 0], circles[c, 1], x0, y0, x1, y1) - circles[c, 2]
            if d < gap:
                gap = d
                if early and gap <= 1e-12:
                    return gap
        for e in range(ax.shape[0]):
            d = _seg_seg(x0, y0, x1, y1, ax[e], ay[e], bx[e], by[e])
            if d < gap:
                gap = d
                if early and gap <= 1e-12:
                    return gap
        x0 = x1
        y0 = y1
    if ax.shape[0] and _inside_one(x0, y0, ax, ay, bx, by, poly_start):
        return 0.0
    return gap


@njit(**_opts)
def arms_collide(qs, lengths, base_x, base_y, circles, ax, ay, bx, by, poly_start):
    m = qs.shape[0]
    out = np.zeros(m, dtype=np.bool_)
    for i in range(m):
        out[i] = _arm_gap(qs[i], lengths, base_x, base_y, circles, ax, ay, bx, by, poly_start, True) <= 1e-12
    return out


@njit(**_opts)
def first_arm_hit(qs, lengths, base_x, base_y, circles, ax, ay, bx, by, poly_start):
    for i in range(qs.shape[0]):
        if _arm_gap(qs[i], lengths, base_x, base_y, circles, ax, ay, bx, by, poly_start, True) <= 1e-12:
            return i
    return -1


@njit(**_opts)
def arm_clearance(q, lengths, base_x, base_y, circles, ax, ay, bx, by, poly_start):
    return max(0.0, _arm_gap(q, lengths, base_x, base_y, circles, ax, ay, bx, by, poly_start, False))


@njit(**_opts)
def arms_clearance(qs, lengths, base_x, base_y, circles, ax, ay, bx, by, poly_start):
    out = np.empty(qs.shape[0])
    for i in range(qs.shape[0]):
        out[i] = max(0.0, _arm_gap(qs[i], lengths, base_x, base_y, circles, ax, ay, bx, by, poly_start, False))
    return out


@njit(**_opts)
def _grid_hit(px, py, occ, ox, oy, cell):
    h, w = occ.shape
    fi = math.floor((px - ox) / cell)
    fj = math.floor((py - oy) / cell)
    if not (fi >= 0 and fj >= 0 and fi < w and fj < h):
        return True
    return occ[int(fj), int(fi)]


@njit(**_opts)
def grid_collide(pts, occ, ox, oy, cell):
    m = pts.shape[0]
    out = np.zeros(m, dtype=np.bool_)
    for i in range(m):
        out[i] = _grid_hit(pts[i, 0], pts[i, 1], occ, ox, oy, cell)
    return out


@njit(**_opts)
def first_grid_hit(pts, occ, ox, oy, cell):
    for i in range(pts.shape[0]):
        if _grid_hit(pts[i, 0], pts[i, 1], occ, ox, oy, cell):
            return i
    return -1
