"""Append-only tree of balls.

Centers and radii live in growable contiguous arrays so the nearest-volume
scan is a single kernel call over the whole tree.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .cspace import InvalidArgument, Metric, as_config

ROOT = -1


@dataclass(frozen=True)
class BallNode:
    center: np.ndarray
    radius: float
    parent: int
    edge: np.ndarray


class BallTree:
    """Balls rooted at one configuration.

    ``radius_floor`` is the trim floor: delta for inexact trees, zero for
    exact trees and point trees.
    """

    def __init__(self, root, r0: float, metric: Metric = Metric.L2, radius_floor: float = 0.0,
                 allow_zero: bool = False):
        root = as_config(root)
        if r0 < 0 or (r0 == 0 and not allow_zero):
            raise InvalidArgument(f"initial radius must be positive, got {r0}")
        if radius_floor < 0:
            raise InvalidArgument("radius floor must be non-negative")
        self.metric = Metric.parse(metric)
        self.radius_floor = float(radius_floor)
        self.dim = root.shape[0]
        cap = 64
        self._centers = np.empty((cap, self.dim))
        self._radii = np.empty(cap)
        self._parents = np.empty(cap, dtype=np.int64)
        self._edges: list[np.ndarray] = []
        self.n = 0
        self.nodes_added = 0
        self.trims = 0
        self._append(root, max(float(r0), self.radius_floor) if r0 > 0 else 0.0, ROOT, root.reshape(1, -1))

    def __len__(self):
        return self.n

    @property
    def centers(self) -> np.ndarray:
        return self._centers[:self.n]

    @property
    def radii(self) -> np.ndarray:
        return self._radii[:self.n]

    @property
    def parents(self) -> np.ndarray:
        return self._parents[:self.n]

    def center(self, i: int) -> np.ndarray:
        return self._centers[i]

    def radius(self, i: int) -> float:
        return float(self._radii[i])

    def node(self, i: int) -> BallNode:
        self._check_index(i)
        return BallNode(self._centers[i].copy(), float(self._radii[i]), int(self._parents[i]), self._edges[i])

    def _check_index(self, i):
        if not (isinstance(i, (int, np.integer)) and 0 <= i < self.n):
            raise InvalidArgument(f"invalid node index {i}")

    def _append(self, center, radius, parent, edge):
        if self.n == self._radii.shape[0]:
            cap = 2 * self.n
            self._centers = np.resize(self._centers, (cap, self.dim))
            self._radii = np.resize(self._radii, cap)
            self._parents = np.resize(self._parents, cap)
        i = self.n
        self._centers[i] = center
        self._radii[i] = radius
        self._parents[i] = parent
        self._edges.append(edge)
        self.n += 1
        self.nodes_added += 1
        return i

    def add_node(self, parent: int, center, radius: float, edge) -> int:
        self._check_index(parent)
        center = as_config(center, self.dim)
        edge = np.asarray(edge, dtype=np.float64)
        if edge.ndim != 2 or edge.shape[0] < 1 or edge.shape[1] != self.dim:
            raise InvalidArgument("edge must be a (k, dim) polyline")
        if not (np.array_equal(edge[0], self._centers[parent]) and np.array_equal(edge[-1], center)):
            raise InvalidArgument("edge must run from the parent center to the new center")
        if radius < self.radius_floor:
            raise InvalidArgument(f"radius {radius} below floor {self.radius_floor}")
        return self._append(center, float(radius), parent, edge)

    def nearest_volume(self, x) -> tuple[int, float]:
        """Node minimising distance-to-center minus radius; lowest index on ties."""
        x = np.ascontiguousarray(x, dtype=np.float64)
        i, d = kernels.nearest_volume(self.centers, self.radii, x, self.metric is Metric.LINF)
        return int(i), float(d)

    def inside(self, x) -> bool:
        return self.nearest_volume(x)[1] < 0.0

    def trim(self, idx: int, collision_dist: float, delta: float | None = None) -> float:
        """Shrink ball ``idx`` after a collision ``collision_dist`` from its center.

        Only collisions strictly inside the current ball trim it. The new
        radius is ``collision_dist + delta``, never below ``delta``.
        """
        self._check_index(idx)
        if collision_dist < 0:
            raise InvalidArgument("collision distance must be non-negative")
        if delta is None:
            delta = self.radius_floor
        old = float(self._radii[idx])
        if collision_dist >= old:
            return old
        new = max(delta, min(old, collision_dist + delta))
        if new != old:
            self._radii[idx] = new
            self.trims += 1
        return new

    def path_to_root(self, idx: int) -> list[np.ndarray]:
        """Configs from the root to node ``idx`` along the stored edges."""
        self._check_index(idx)
        chain = []
        i = idx
        while i != ROOT:
            chain.append(i)
            i = int(self._parents[i])
        pts = [self._centers[0].copy()]
        for i in reversed(chain[:-1]):
            for p in self._edges[i][1:]:
                pts.append(p.copy())
        return pts

    def to_dict(self) -> dict:
        return {
            "metric": self.metric.value,
            "radius_floor": self.radius_floor,
            "nodes": [
                {"center": self._centers[i].tolist(), "radius": float(self._radii[i]), "parent": int(self._parents[i])}
                for i in range(self.n)
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BallTree":
        nodes = data["nodes"]
        root = nodes[0]
        t = cls(root["center"], root["radius"], data.get("metric", "L2"), data.get("radius_floor", 0.0), allow_zero=True)
        t._radii[0] = root["radius"]
        for nd in nodes[1:]:
            p = int(nd["parent"])
            c = np.asarray(nd["center"], dtype=np.float64)
            # dumps carry centers only; edges become straight segments
            t._check_index(p)
            t._append(c, float(nd["radius"]), p, np.vstack([t._centers[p], c]))
        t.nodes_added = t.n
        return t


def init_tree(root, r0: float, metric: Metric = Metric.L2, radius_floor: float = 0.0, allow_zero: bool = False) -> BallTree:
    return BallTree(root, r0, metric, radius_floor, allow_zero)

