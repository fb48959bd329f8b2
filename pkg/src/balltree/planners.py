"""Bidirectional planners: RRT-Connect and the exact / inexact ball trees.

All three share one outer loop. Ball-tree variants reject samples that land
inside either tree and extend greedily (no step cap) toward the sample; the
RRT-Connect baseline keeps point nodes and a fixed step cap.
"""
from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .cspace import Metric, Rng, as_config, distance, sample_uniform
from .environments import Environment, InvalidArgument, Unsupported
from .tree import BallTree


class Variant(str, enum.Enum):
    RRT_CONNECT = "RrtConnect"
    EXACT = "ExactBall"
    INEXACT = "InexactBall"

    @classmethod
    def parse(cls, value) -> "Variant":
        if isinstance(value, Variant):
            return value
        key = str(value).strip().lower()
        aliases = {"rrt": cls.RRT_CONNECT, "rrtconnect": cls.RRT_CONNECT, "rrt-connect": cls.RRT_CONNECT,
                   "exact": cls.EXACT, "exactball": cls.EXACT,
                   "inexact": cls.INEXACT, "inexactball": cls.INEXACT}
        if key in aliases:
            return aliases[key]
        raise InvalidArgument(f"unknown planner variant {value!r}")

    @property
    def short(self) -> str:
        return {"RrtConnect": "rrt", "ExactBall": "exact", "InexactBall": "inexact"}[self.value]


class ExtendStatus(str, enum.Enum):
    REACHED = "Reached"
    ADVANCED = "Advanced"
    TRAPPED = "Trapped"
    PLAN_FOUND = "PlanFound"


class Outcome(str, enum.Enum):
    SOLVED = "Solved"
    ITERATION_LIMIT = "IterationLimit"
    TIME_LIMIT = "TimeLimit"


@dataclass(frozen=True)
class PlannerParams:
    variant: Variant = Variant.INEXACT
    metric: Metric = Metric.L2
    resolution: float = 0.05
    r0: float = 2.5
    delta: float = 0.05
    rrt_step: float = 0.5
    max_iterations: int = 100_000
    time_budget: float = 120.0
    seed: int = 0
    # also trim a freshly added inexact node by the collision that stopped it
    trim_new: bool = True

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant.parse(self.variant))
        object.__setattr__(self, "metric", Metric.parse(self.metric))
        if not self.resolution > 0:
            raise InvalidArgument("resolution must be positive")
        if not self.r0 > 0:
            raise InvalidArgument("r0 must be positive")
        if not self.delta >= 0:
            raise InvalidArgument("delta must be non-negative")
        if self.delta > self.r0:
            raise InvalidArgument("delta must not exceed r0")
        if not self.rrt_step > 0:
            raise InvalidArgument("rrt_step must be positive")
        if int(self.max_iterations) < 1:
            raise InvalidArgument("max_iterations must be at least 1")
        if not self.time_budget > 0:
            raise InvalidArgument("time_budget must be positive")

    @classmethod
    def for_bounds(cls, bounds, **overrides) -> "PlannerParams":
        """Defaults scaled to the bounds diagonal, then ``overrides``."""
        diag = bounds.diagonal
        res = 0.005 * diag
        base = dict(resolution=res, r0=0.25 * diag, delta=res, rrt_step=0.05 * diag)
        if "resolution" in overrides and "delta" not in overrides:
            base["delta"] = overrides["resolution"]
        base.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**base)

    def with_(self, **changes) -> "PlannerParams":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


@dataclass
class NewState:
    reached: np.ndarray
    status: ExtendStatus
    collision_dist: float | None
    collision_point: np.ndarray | None
    polyline: np.ndarray
    checks: int


def new_state(env: Environment, start, toward, resolution: float, cap: float | None = None) -> NewState:
    """Walk the straight segment from ``start`` toward ``toward``.

    With ``cap`` the target is truncated to that L2 length. Advanced needs at
    least one validated probe, i.e. one full resolution step of progress.
    """
    start = np.asarray(start, dtype=np.float64)
    toward = np.asarray(toward, dtype=np.float64)
    target = toward
    if cap is not None:
        d = toward - start
        length = math.sqrt(float(d @ d))
        if length > cap:
            target = start + (cap / length) * d
    seg = env.validate_segment(start, target, resolution)
    if seg.free:
        status = ExtendStatus.REACHED if target is toward else ExtendStatus.ADVANCED
        return NewState(seg.last_free, status, None, None, seg.polyline, seg.checks)
    status = ExtendStatus.ADVANCED if seg.polyline.shape[0] > 1 else ExtendStatus.TRAPPED
    return NewState(seg.last_free, status, seg.collision_dist, seg.collision_point, seg.polyline, seg.checks)


@dataclass
class Bridge:
    """Verified connection from node ``node_a`` of ``tree_a`` to ``node_b`` of ``tree_b``."""

    tree_a: BallTree
    node_a: int
    tree_b: BallTree
    node_b: int
    polyline: np.ndarray

    @property
    def verified(self) -> bool:
        p = self.polyline
        return (
            p is not None and len(p) >= 1
            and np.array_equal(p[0], self.tree_a.center(self.node_a))
            and np.array_equal(p[-1], self.tree_b.center(self.node_b))
        )


def _append_dedup(out, pts):
    for p in pts:
        if not out or not np.array_equal(out[-1], p):
            out.append(np.array(p, dtype=np.float64))


def extract_path(bridge: Bridge, start_tree: BallTree | None = None) -> list[np.ndarray]:
    """Start-to-goal path through ``bridge``; ``start_tree`` picks orientation."""
    if not bridge.verified:
        raise InvalidArgument("bridge endpoints do not match the tree nodes")
    path: list[np.ndarray] = []
    _append_dedup(path, bridge.tree_a.path_to_root(bridge.node_a))
    _append_dedup(path, bridge.polyline)
    _append_dedup(path, reversed(bridge.tree_b.path_to_root(bridge.node_b)))
    if start_tree is bridge.tree_b:
        path.reverse()
    return path


@dataclass
class PlanResult:
    outcome: Outcome
    path: list | None
    nodes_a: int
    nodes_b: int
    samples_drawn: int = 0
    samples_rejected: int = 0
    collision_checks: int = 0
    trims: int = 0
    wall_time: float = 0.0
    iterations: int = 0
    variant: Variant = Variant.INEXACT
    trees: tuple = field(default=(), repr=False, compare=False)
    audit: dict | None = field(default=None, repr=False, compare=False)

    @property
    def solved(self) -> bool:
        return self.outcome is Outcome.SOLVED

    @property
    def total_nodes(self) -> int:
        return self.nodes_a + self.nodes_b

    def counters(self) -> dict:
        return {
            "outcome": self.outcome.value, "nodes_a": self.nodes_a, "nodes_b": self.nodes_b,
            "samples_drawn": self.samples_drawn, "samples_rejected": self.samples_rejected,
            "collision_checks": self.collision_checks, "trims": self.trims, "iterations": self.iterations,
        }


class PlanRun:
    """State of one planning query: trees, counters and the found bridge."""

    def __init__(self, env: Environment, start, goal, params: PlannerParams, audit: bool = False):
        self.env = env
        self.params = params
        self.start = as_config(start, env.dim) if len(np.shape(start)) == 1 else None
        self.goal = as_config(goal, env.dim) if len(np.shape(goal)) == 1 else None
        if self.start is None or self.goal is None:
            raise InvalidArgument("start and goal must be vectors")
        for name, q in (("start", self.start), ("goal", self.goal)):
            if env.is_collision(q):
                raise InvalidArgument(f"{name} configuration is in collision or out of bounds")
        if params.variant is Variant.EXACT and not env.has_clearance:
            raise Unsupported(f"exact ball tree needs a clearance oracle; {env.kind} has none")
        self.collision_checks = 2
        self.bridge: Bridge | None = None
        self.last_connect_node = -1
        self.audit = (
            {"sample_violations": 0, "samples_checked": 0, "trim_events": [], "rejected": [], "overlap_exits": []}
            if audit else None
        )
        self.tree_start = self._new_tree(self.start)
        self.tree_goal = self._new_tree(self.goal)

    # -- node radii per variant ---------------------------------------------

    def _exact_radius(self, q) -> float:
        r = self.env.clearance(q)
        if r is None:
            raise Unsupported(f"{self.env.kind} has no clearance oracle")
        if self.params.metric is Metric.LINF:
            # an Linf ball of radius r sits inside the L2 ball of radius r*sqrt(N)
            r /= math.sqrt(self.env.dim)
        return r

    def _new_tree(self, root) -> BallTree:
        p = self.params
        if p.variant is Variant.INEXACT:
            return BallTree(root, p.r0, p.metric, radius_floor=p.delta)
        if p.variant is Variant.EXACT:
            return BallTree(root, self._exact_radius(root), p.metric, allow_zero=True)
        return BallTree(root, 0.0, p.metric, allow_zero=True)

    def _new_state(self, a, b, cap=None) -> NewState:
        ns = new_state(self.env, a, b, self.params.resolution, cap)
        self.collision_checks += ns.checks
        return ns

    def _trim(self, tree: BallTree, idx: int, point: np.ndarray) -> bool:
        d = distance(tree.metric, tree.center(idx), point)
        old = tree.radius(idx)
        new = tree.trim(idx, d, self.params.delta)
        if self.audit is not None:
            self.audit["trim_events"].append((tree, idx, point.copy(), old, new))
        return new != old

    # -- extend operations --------------------------------------------------

    def exact_extend(self, tree: BallTree, x):
        i, _ = tree.nearest_volume(x)
        ns = self._new_state(tree.center(i), x)
        if ns.status is ExtendStatus.TRAPPED:
            return None, ExtendStatus.TRAPPED
        new = tree.add_node(i, ns.reached, self._exact_radius(ns.reached), ns.polyline)
        return new, ns.status

    def inexact_extend(self, tree: BallTree, x, other: BallTree):
        i, _ = tree.nearest_volume(x)
        ns = self._new_state(tree.center(i), x)
        if ns.collision_point is not None:
            self._trim(tree, i, ns.collision_point)
        if ns.status is ExtendStatus.TRAPPED:
            return None, ExtendStatus.TRAPPED
        new = tree.add_node(i, ns.reached, self.params.r0, ns.polyline)
        if ns.collision_point is not None and self.params.trim_new:
            self._trim(tree, new, ns.collision_point)
        if self.check_overlap(new, tree, other) is ExtendStatus.PLAN_FOUND:
            return new, ExtendStatus.PLAN_FOUND
        return new, ns.status

    def rrt_extend(self, tree: BallTree, x):
        i, _ = tree.nearest_volume(x)
        ns = self._new_state(tree.center(i), x, cap=self.params.rrt_step)
        if ns.status is ExtendStatus.TRAPPED:
            return None, ExtendStatus.TRAPPED
        return tree.add_node(i, ns.reached, 0.0, ns.polyline), ns.status

    def extend(self, tree: BallTree, x, other: BallTree):
        v = self.params.variant
        if v is Variant.INEXACT:
            return self.inexact_extend(tree, x, other)
        if v is Variant.EXACT:
            return self.exact_extend(tree, x)
        return self.rrt_extend(tree, x)

    def check_overlap(self, new: int, tree: BallTree, other: BallTree) -> ExtendStatus | None:
        """Bridge or trim until ball ``new`` overlaps nothing in ``other``.

        Returns PLAN_FOUND on a verified bridge, else None (no overlap left,
        or overlap persisting at the radius floor).
        """
        c = tree.center(new)
        while True:
            j, mindist = other.nearest_volume(c)
            if mindist >= 0.0:
                self._note_overlap_exit(tree, new, other, stalled=False)
                return None
            ns = self._new_state(c, other.center(j))
            if ns.status is ExtendStatus.REACHED:
                self.bridge = Bridge(tree, new, other, j, ns.polyline)
                return ExtendStatus.PLAN_FOUND
            p = ns.collision_point
            changed = self._trim(tree, new, p)
            changed = self._trim(other, j, p) or changed
            if not changed:
                self._note_overlap_exit(tree, new, other, stalled=True)
                return None

    def _note_overlap_exit(self, tree, new, other, stalled):
        if self.audit is not None:
            _, mindist = other.nearest_volume(tree.center(new))
            self.audit["overlap_exits"].append((mindist, stalled))

    def connect(self, tree: BallTree, x, other: BallTree) -> ExtendStatus:
        """Extend ``tree`` toward ``x`` until it stops advancing.

        An Advanced step that fails to bring the tree at least half a
        resolution step closer to ``x`` ends the loop as Trapped: with ball
        trees the nearest volume can otherwise re-grow the same blocked edge
        forever when the slack keeps its ball from shrinking.
        """
        best = math.inf
        while True:
            new, status = self.extend(tree, x, other)
            if new is not None:
                self.last_connect_node = new
            if status is not ExtendStatus.ADVANCED:
                return status
            gap = distance(tree.metric, tree.center(new), x)
            if gap > best - 0.5 * self.params.resolution:
                return ExtendStatus.TRAPPED
            best = gap

    # -- outer loop ----------------------------------------------------------

    def _audit_sample(self, x, trees):
        # independent containment check straight from the stored arrays
        self.audit["samples_checked"] += 1
        for t in trees:
            diff = t.centers - x
            if t.metric is Metric.LINF:
                d = np.abs(diff).max(axis=1)
            else:
                d = np.sqrt((diff**2).sum(axis=1))
            if np.any(d < t.radii):
                self.audit["sample_violations"] += 1
                return

    def run(self) -> PlanResult:
        p = self.params
        rng = Rng(p.seed)
        bounds = self.env.bounds
        ta, tb = self.tree_start, self.tree_goal
        use_volumes = p.variant is not Variant.RRT_CONNECT
        drawn = rejected = iters = 0
        outcome = Outcome.ITERATION_LIMIT
        t0 = time.perf_counter()

        if np.array_equal(self.start, self.goal):
            self.bridge = Bridge(ta, 0, tb, 0, self.start.reshape(1, -1))
            outcome = Outcome.SOLVED
        elif p.variant is Variant.INEXACT and self.check_overlap(0, ta, tb) is ExtendStatus.PLAN_FOUND:
            outcome = Outcome.SOLVED

        while outcome is not Outcome.SOLVED:
            if iters >= p.max_iterations:
                outcome = Outcome.ITERATION_LIMIT
                break
            if time.perf_counter() - t0 > p.time_budget:
                outcome = Outcome.TIME_LIMIT
                break
            iters += 1
            x = sample_uniform(rng, bounds)
            drawn += 1
            reject = use_volumes and (ta.inside(x) or tb.inside(x))
            if self.audit is not None:
                self.audit["rejected"].append(reject)
            if reject:
                rejected += 1
                continue
            if self.audit is not None and use_volumes:
                self._audit_sample(x, (ta, tb))
            new, status = self.extend(ta, x, tb)
            if status is ExtendStatus.PLAN_FOUND:
                outcome = Outcome.SOLVED
                break
            if new is not None:
                target = ta.center(new).copy()
                st = self.connect(tb, target, ta)
                if st is ExtendStatus.PLAN_FOUND:
                    outcome = Outcome.SOLVED
                    break
                if st is ExtendStatus.REACHED:
                    # tb's last node sits exactly on ta's new center
                    self.bridge = Bridge(ta, new, tb, self.last_connect_node, target.reshape(1, -1))
                    outcome = Outcome.SOLVED
                    break
            ta, tb = tb, ta

        wall = time.perf_counter() - t0
        path = None
        if outcome is Outcome.SOLVED:
            path = extract_path(self.bridge, self.tree_start)
        ts, tg = self.tree_start, self.tree_goal
        return PlanResult(
            outcome=outcome,
            path=path,
            nodes_a=len(ts),
            nodes_b=len(tg),
            samples_drawn=drawn,
            samples_rejected=rejected,
            collision_checks=self.collision_checks,
            trims=ts.trims + tg.trims,
            wall_time=wall,
            iterations=iters,
            variant=p.variant,
            trees=(ts, tg),
            audit=self.audit,
        )


def plan(env: Environment, start, goal, params: PlannerParams, audit: bool = False) -> PlanResult:
    """Run the planner selected by ``params.variant``."""
    return PlanRun(env, start, goal, params, audit=audit).run()


def ball_tree_plan(env: Environment, start, goal, params: PlannerParams, audit: bool = False) -> PlanResult:
    if params.variant is Variant.RRT_CONNECT:
        raise InvalidArgument("ball_tree_plan needs the exact or inexact variant")
    return plan(env, start, goal, params, audit)


def rrt_connect_plan(env: Environment, start, goal, params: PlannerParams) -> PlanResult:
    return plan(env, start, goal, params.with_(variant=Variant.RRT_CONNECT))
