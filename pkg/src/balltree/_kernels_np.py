"""Pure-numpy kernels.

Every function here has a twin of the same name and signature in
``_kernels_nb``. Polygon sets are passed as flat edge arrays: ``ax, ay, bx, by``
hold the endpoints of every edge, ``poly_start`` holds the offset of each
polygon's first edge (length ``P + 1``).
"""
import numpy as np

CHUNK = 64


def nearest_volume(centers, radii, x, linf):
    diff = centers - x
    if linf:
        d = np.abs(diff).max(axis=1)
    else:
        d = np.sqrt((diff * diff).sum(axis=1))
    score = d - radii
    i = int(np.argmin(score))
    return i, float(score[i])


def _point_seg_dist(px, py, ax, ay, bx, by):
    # broadcasts (m,1) points against (E,) segments
    dx = bx - ax
    dy = by - ay
    den = dx * dx + dy * dy
    with np.errstate(invalid="ignore", divide="ignore"):
        t = ((px - ax) * dx + (py - ay) * dy) / den
    t = np.where(den > 0.0, np.clip(t, 0.0, 1.0), 0.0)
    ex = ax + t * dx - px
    ey = ay + t * dy - py
    return np.sqrt(ex * ex + ey * ey)


def _inside_any(px, py, ax, ay, bx, by, poly_start):
    """Crossing-number test of (m,) points against every polygon."""
    m = px.shape[0]
    if ax.shape[0] == 0:
        return np.zeros(m, dtype=np.bool_)
    p_x = px[:, None]
    p_y = py[:, None]
    cond = (ay > p_y) != (by > p_y)
    with np.errstate(invalid="ignore", divide="ignore"):
        xi = ax + (p_y - ay) * (bx - ax) / (by - ay)
    cross = cond & (p_x < xi)
    counts = np.add.reduceat(cross.astype(np.int64), poly_start[:-1], axis=1)
    return (counts % 2 == 1).any(axis=1)


def points_collide(pts, ax, ay, bx, by, poly_start):
    return _inside_any(pts[:, 0], pts[:, 1], ax, ay, bx, by, poly_start)


def point_clearance(px, py, ax, ay, bx, by, poly_start):
    if ax.shape[0] == 0:
        return np.inf
    p = np.array([[px, py]])
    if _inside_any(p[:, 0], p[:, 1], ax, ay, bx, by, poly_start)[0]:
        return 0.0
    return float(_point_seg_dist(px, py, ax, ay, bx, by).min())


def points_clearance(pts, ax, ay, bx, by, poly_start):
    m = pts.shape[0]
    if ax.shape[0] == 0:
        return np.full(m, np.inf)
    d = _point_seg_dist(pts[:, :1], pts[:, 1:], ax, ay, bx, by).min(axis=1)
    return np.where(_inside_any(pts[:, 0], pts[:, 1], ax, ay, bx, by, poly_start), 0.0, d)


def _seg_seg_dist(p0x, p0y, p1x, p1y, ax, ay, bx, by):
    """Distance between (m,k) query segments and (E,) edges -> (m,k,E)."""
    p0x = p0x[..., None]
    p0y = p0y[..., None]
    p1x = p1x[..., None]
    p1y = p1y[..., None]
    o1 = (bx - ax) * (p0y - ay) - (by - ay) * (p0x - ax)
    o2 = (bx - ax) * (p1y - ay) - (by - ay) * (p1x - ax)
    o3 = (p1x - p0x) * (ay - p0y) - (p1y - p0y) * (ax - p0x)
    o4 = (p1x - p0x) * (by - p0y) - (p1y - p0y) * (bx - p0x)
    proper = (o1 * o2 < 0.0) & (o3 * o4 < 0.0)
    d = np.minimum(
        np.minimum(_point_seg_dist(p0x, p0y, ax, ay, bx, by), _point_seg_dist(p1x, p1y, ax, ay, bx, by)),
        np.minimum(_point_seg_dist(ax, ay, p0x, p0y, p1x, p1y), _point_seg_dist(bx, by, p0x, p0y, p1x, p1y)),
    )
    return np.where(proper, 0.0, d)


def _rect_corners(poses, hx, hy):
    c = np.cos(poses[:, 2])[:, None]
    s = np.sin(poses[:, 2])[:, None]
    lx = np.array([hx, -hx, -hx, hx])
    ly = np.array([hy, hy, -hy, -hy])
    cx = poses[:, 0:1] + c * lx - s * ly
    cy = poses[:, 1:2] + s * lx + c * ly
    return cx, cy


def _rect_edges(poses, hx, hy):
    cx, cy = _rect_corners(poses, hx, hy)
    return cx, cy, np.roll(cx, -1, axis=1), np.roll(cy, -1, axis=1)


def _rect_contains(poses, hx, hy, qx, qy):
    """(m,) poses against (K,) points -> (m,K) containment."""
    c = np.cos(poses[:, 2])[:, None]
    s = np.sin(poses[:, 2])[:, None]
    dx = qx - poses[:, 0:1]
    dy = qy - poses[:, 1:2]
    u = c * dx + s * dy
    v = -s * dx + c * dy
    return (np.abs(u) <= hx) & (np.abs(v) <= hy)


def rects_collide(poses, hx, hy, ax, ay, bx, by, poly_start):
    m = poses.shape[0]
    if ax.shape[0] == 0:
        return np.zeros(m, dtype=np.bool_)
    p0x, p0y, p1x, p1y = _rect_edges(poses, hx, hy)
    d = _seg_seg_dist(p0x, p0y, p1x, p1y, ax, ay, bx, by)
    hit = (d <= 1e-12).reshape(m, -1).any(axis=1)
    hit |= _inside_any(poses[:, 0], poses[:, 1], ax, ay, bx, by, poly_start)
    first = poly_start[:-1]
    hit |= _rect_contains(poses, hx, hy, ax[first], ay[first]).any(axis=1)
    return hit


def rect_clearance(pose, hx, hy, ax, ay, bx, by, poly_start):
    if ax.shape[0] == 0:
        return np.inf
    poses = np.asarray(pose, dtype=np.float64).reshape(1, 3)
    if rects_collide(poses, hx, hy, ax, ay, bx, by, poly_start)[0]:
        return 0.0
    p0x, p0y, p1x, p1y = _rect_edges(poses, hx, hy)
    return float(_seg_seg_dist(p0x, p0y, p1x, p1y, ax, ay, bx, by).min())


def rects_clearance(poses, hx, hy, ax, ay, bx, by, poly_start):
    m = poses.shape[0]
    if ax.shape[0] == 0:
        return np.full(m, np.inf)
    p0x, p0y, p1x, p1y = _rect_edges(poses, hx, hy)
    d = _seg_seg_dist(p0x, p0y, p1x, p1y, ax, ay, bx, by).min(axis=(1, 2))
    return np.where(rects_collide(poses, hx, hy, ax, ay, bx, by, poly_start), 0.0, d)


def arm_joints(qs, lengths, base_x, base_y):
    """Joint positions for (m,n) configs -> xs, ys of shape (m, n+1)."""
    ang = np.cumsum(qs, axis=1)
    xs = np.concatenate([np.full((qs.shape[0], 1), base_x), base_x + np.cumsum(lengths * np.cos(ang), axis=1)], axis=1)
    ys = np.concatenate([np.full((qs.shape[0], 1), base_y), base_y + np.cumsum(lengths * np.sin(ang), axis=1)], axis=1)
    return xs, ys


def _arm_gap(qs, lengths, base_x, base_y, circles, ax, ay, bx, by, poly_start):
    """Per-config signed-ish workspace gap: <= 0 means collision."""
    m = qs.shape[0]
    xs, ys = arm_joints(qs, lengths, base_x, base_y)
    p0x, p0y, p1x, p1y = xs[:, :-1], ys[:, :-1], xs[:, 1:], ys[:, 1:]
    gap = np.full(m, np.inf)
    if circles.shape[0]:
        d = _seg_seg_dist(p0x, p0y, p1x, p1y, circles[:, 0], circles[:, 1], circles[:, 0], circles[:, 1])
        gap = np.minimum(gap, (d - circles[:, 2]).reshape(m, -1).min(axis=1))
    if ax.shape[0]:
        d = _seg_seg_dist(p0x, p0y, p1x, p1y, ax, ay, bx, by)
        gap = np.minimum(gap, d.reshape(m, -1).min(axis=1))
        inside = _inside_any(xs.ravel(), ys.ravel(), ax, ay, bx, by, poly_start).reshape(m, -1).any(axis=1)
        gap = np.where(inside, 0.0, gap)
    return gap


def arms_collide(qs, lengths, base_x, base_y, circles, ax, ay, bx, by, poly_start):
    return _arm_gap(qs, lengths, base_x, base_y, circles, ax, ay, bx, by, poly_start) <= 1e-12


def arm_clearance(q, lengths, base_x, base_y, circles, ax, ay, bx, by, poly_start):
    qs = np.asarray(q, dtype=np.float64).reshape(1, -1)
    return max(0.0, float(_arm_gap(qs, lengths, base_x, base_y, circles, ax, ay, bx, by, poly_start)[0]))


def arms_clearance(qs, lengths, base_x, base_y, circles, ax, ay, bx, by, poly_start):
    return np.maximum(0.0, _arm_gap(qs, lengths, base_x, base_y, circles, ax, ay, bx, by, poly_start))


def grid_collide(pts, occ, ox, oy, cell):
    h, w = occ.shape
    ci = np.floor((pts[:, 0] - ox) / cell)
    cj = np.floor((pts[:, 1] - oy) / cell)
    out = (ci < 0) | (cj < 0) | (ci >= w) | (cj >= h) | ~np.isfinite(ci) | ~np.isfinite(cj)
    i = np.where(out, 0, ci).astype(np.int64)
    j = np.where(out, 0, cj).astype(np.int64)
    return out | occ[j, i]


def first_hit(collide, configs, *args):
    """Index of the first colliding config, or -1."""
    for s in range(0, configs.shape[0], CHUNK):
        hits = collide(configs[s:s + CHUNK], *args)
        if hits.any():
            return s + int(np.argmax(hits))
    return -1


def first_point_hit(pts, ax, ay, bx, by, poly_start):
    return first_hit(points_collide, pts, ax, ay, bx, by, poly_start)


def first_rect_hit(poses, hx, hy, ax, ay, bx, by, poly_start):
    return first_hit(rects_collide, poses, hx, hy, ax, ay, bx, by, poly_start)


def first_arm_hit(qs, lengths, base_x, base_y, circles, ax, ay, bx, by, poly_start):
    return first_hit(arms_collide, qs, lengths, base_x, base_y, circles, ax, ay, bx, by, poly_start)


def first_grid_hit(pts, occ, ox, oy, cell):
    return first_hit(grid_collide, pts, occ, ox, oy, cell)
