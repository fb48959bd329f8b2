"""Volumetric ball-tree motion planners with an RRT-Connect baseline."""
from .cspace import Bounds, Metric, Rng, distance, interpolate, sample_uniform
from .environments import (
    InvalidArgument,
    OccupancyGrid2D,
    PlanarArmWorld,
    PolygonWorld2D,
    RigidRectangleWorld,
    SegmentResult,
    Unsupported,
    forward_kinematics,
)
from .planners import ExtendStatus, Outcome, PlannerParams, PlanResult, Variant, plan
from .tree import BallTree, init_tree

__version__ = "0.1.0"
