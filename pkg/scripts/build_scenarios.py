"""Regenerate the bundled scenario files under src/balltree/scenarios."""
import json
import math
import sys
from pathlib import Path

import numpy as np

from balltree.environments import box, synthetic_urban_grid, write_pgm

OUT = Path(__file__).resolve().parents[1] / "src" / "balltree" / "scenarios"


def polys(*boxes):
    return [b.tolist() for b in boxes]


def bugtrap(tunnel_width=1.5, tunnel_length=10.0, goal=(29.0, 16.0, 0.0), margin=6.0):
    # 20x20 room with unit walls; a tunnel pokes inward from the right wall
    lo, hi, t = 6.0, 26.0, 1.0
    yc = 16.0
    half = tunnel_width / 2
    walls = [
        box(lo, lo, hi, lo + t), box(lo, hi - t, hi, hi), box(lo, lo + t, lo + t, hi - t),
        box(hi - t, lo + t, hi, yc - half), box(hi - t, yc + half, hi, hi - t),
        box(hi - t - tunnel_length, yc - half - 0.5, hi - t, yc - half),
        box(hi - t - tunnel_length, yc + half, hi - t, yc + half + 0.5),
    ]
    return {
        "version": 1,
        "name": "bugtrap",
        "description": "Rigid 2x1 rectangle leaving a 20x20 room through a tunnel 1.5x its short side.",
        "environment": {"kind": "rigid_rectangle", "half_extents": [1.0, 0.5], "obstacles": polys(*walls)},
        "bounds": {"lower": [lo - margin, lo - margin, -math.pi], "upper": [hi + margin, hi + margin, math.pi]},
        "start": [11.0, 11.0, math.pi / 2],
        "goal": list(goal),
        "params": {"r0": 4.0, "max_iterations": 100000, "time_budget": 120.0},
    }


def arm10(gap=1.6, wall_y=5.0):
    # ten unit links; the goal pose threads the arm up through a slot
    h = gap / 2
    walls = [box(-12.0, wall_y, -h, wall_y + 1.0), box(h, wall_y, 12.0, wall_y + 1.0), box(3.0, -4.0, 5.0, -1.5)]
    return {
        "version": 1,
        "name": "arm10",
        "description": "Ten-link planar arm lifting from a horizontal pose through a 1.6-wide slot.",
        "environment": {
            "kind": "planar_arm",
            "link_lengths": [1.0] * 10,
            "base": [0.0, 0.0],
            "obstacles": polys(*walls),
            "circles": [[-4.0, -2.5, 1.0]],
        },
        "bounds": {"lower": [-math.pi] + [-math.pi / 2] * 9, "upper": [math.pi] + [math.pi / 2] * 9},
        "start": [0.0] * 10,
        "goal": [math.pi / 2] + [0.0] * 9,
        "params": {"resolution": 0.02, "max_iterations": 100000, "time_budget": 120.0},
    }


def urban(seed=3):
    occ = synthetic_urban_grid(seed)
    write_pgm(OUT / "urban.pgm", occ)
    n = occ.shape[0]
    return {
        "version": 1,
        "name": "urban",
        "description": f"Synthetic {n}x{n} city-block occupancy grid (seed {seed}), corner to corner.",
        "environment": {"kind": "occupancy_grid", "cell_size": 1.0, "origin": [0.0, 0.0], "pgm": "urban.pgm"},
        "bounds": {"lower": [0.0, 0.0], "upper": [float(n), float(n)]},
        "start": [2.5, 2.5],
        "goal": [n - 2.5, n - 2.5],
        "params": {"resolution": 0.5, "r0": 6.0, "max_iterations": 100000, "time_budget": 120.0},
    }


def polygon_world(name, description, obstacles, upper, start, goal, **params):
    return {
        "version": 1,
        "name": name,
        "description": description,
        "environment": {"kind": "polygon_world", "obstacles": polys(*obstacles)},
        "bounds": {"lower": [0.0, 0.0], "upper": list(upper)},
        "start": list(start),
        "goal": list(goal),
        "params": {"max_iterations": 10000, **params},
    }


def easy_worlds():
    yield polygon_world("empty", "Point robot in an empty 10x10 square.", [], (10.0, 10.0), (1.0, 1.0), (9.0, 9.0))
    yield polygon_world(
        "gapwall", "A full-height wall with a unit gap at mid height.",
        [box(4.5, 0.0, 5.5, 4.5), box(4.5, 5.5, 5.5, 10.0)], (10.0, 10.0), (1.0, 1.0), (9.0, 9.0), r0=2.0,
    )
    yield polygon_world(
        "corridor", "Two rooms joined by a 4-long corridor of width 1.",
        [box(8.0, 0.0, 12.0, 4.5), box(8.0, 5.5, 12.0, 10.0)], (20.0, 10.0), (2.0, 2.0), (18.0, 8.0), r0=2.0,
    )
    # S-bend of width 1: no straight segment crosses the band, so samples
    # must land inside the passage
    yield polygon_world(
        "zigzag", "A solid band crossed only by an S-shaped passage of width 1.",
        [box(6.0, 0.0, 14.0, 2.0), box(6.0, 8.0, 14.0, 10.0), box(6.0, 3.0, 9.5, 8.0), box(10.5, 2.0, 14.0, 7.0)],
        (20.0, 10.0), (2.0, 5.0), (18.0, 5.0), r0=2.0,
    )
    blobs = [
        [[3.0, 2.0], [6.0, 3.5], [4.0, 6.0]],
        [[8.0, 8.0], [12.0, 7.0], [13.0, 11.0], [10.0, 13.0], [7.5, 11.0]],
        [[14.0, 2.0], [18.0, 2.0], [18.0, 6.0], [16.5, 6.0], [16.5, 3.5], [14.0, 3.5]],
        [[2.0, 12.0], [6.0, 14.0], [5.0, 18.0], [3.0, 16.0]],
        [[13.0, 14.0], [17.0, 13.0], [18.0, 17.0]],
    ]
    yield polygon_world(
        "polygons", "Point robot among five irregular polygons, one of them concave.",
        [np.asarray(b) for b in blobs], (20.0, 20.0), (1.0, 1.0), (19.0, 19.0),
    )


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for sc in (bugtrap(), arm10(), urban(), *easy_worlds()):
        (OUT / f"{sc['name']}.scenario").write_text(json.dumps(sc, indent=1) + "\n", encoding="utf-8")


if __name__ == "__main__":
    sys.exit(main())
