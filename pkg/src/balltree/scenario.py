"""Scenario files: UTF-8 JSON describing a world, bounds, start/goal and
planner parameter overrides.

Schema (``version`` 1)::

    {
      "version": 1,
      "name": "bugtrap",
      "description": "...",
      "environment": {"kind": "rigid_rectangle", ...},
      "bounds": {"lower": [...], "upper": [...]},
      "start": [...], "goal": [...],
      "params": {"r0": 11.0, "max_iterations": 100000, ...}
    }

Environment payloads per kind:

* ``polygon_world``: ``obstacles`` (list of vertex lists)
* ``rigid_rectangle``: ``half_extents`` [w/2, h/2], ``obstacles``
* ``planar_arm``: ``link_lengths``, ``base``, ``obstacles``, ``circles`` ([x, y, r])
* ``occupancy_grid``: ``cell_size``, ``origin``, and either ``raster``
  (rows of ``#``/``.``, top row first) or ``pgm`` (path relative to the file)
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .cspace import Bounds
from .environments import Environment, InvalidArgument, environment_from_dict, write_pgm
from .planners import PlannerParams

PARAM_KEYS = ("metric", "resolution", "r0", "delta", "rrt_step", "max_iterations", "time_budget", "trim_new")


class ScenarioError(InvalidArgument):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class Scenario:
    name: str
    env: Environment
    start: np.ndarray
    goal: np.ndarray
    params: dict = field(default_factory=dict)
    description: str = ""
    source: Path | None = None

    @property
    def bounds(self) -> Bounds:
        return self.env.bounds

    @property
    def dim(self) -> int:
        return self.env.dim

    def planner_params(self, variant, seed: int = 0, **overrides) -> PlannerParams:
        """Bounds-scaled defaults, then the file's overrides, then ``overrides``."""
        merged = dict(self.params)
        merged.update({k: v for k, v in overrides.items() if v is not None})
        return PlannerParams.for_bounds(self.bounds, variant=variant, seed=seed, **merged)

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "name": self.name,
            "description": self.description,
            "environment": self.env.to_dict(),
            "bounds": {"lower": self.bounds.lower.tolist(), "upper": self.bounds.upper.tolist()},
            "start": self.start.tolist(),
            "goal": self.goal.tolist(),
            "params": dict(self.params),
        }

    def __eq__(self, other):
        return isinstance(other, Scenario) and self.to_dict() == other.to_dict()


def _vector(data, key, dim=None):
    try:
        v = np.asarray(data[key], dtype=np.float64)
    except KeyError:
        raise ScenarioError(key, "missing") from None
    except (TypeError, ValueError) as e:
        raise ScenarioError(key, f"not a numeric vector ({e})") from None
    if v.ndim != 1 or (dim is not None and v.shape[0] != dim):
        raise ScenarioError(key, f"expected a vector of length {dim}, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ScenarioError(key, "non-finite coordinates")
    return v


def scenario_from_dict(data: dict, base_dir: Path | None = None) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("<root>", "scenario must be a JSON object")
    name = data.get("name")
    if not isinstance(name, str) or not name:
        raise ScenarioError("name", "missing or empty")
    b = data.get("bounds")
    if not isinstance(b, dict):
        raise ScenarioError("bounds", "missing")
    lower = _vector(b, "lower")
    upper = _vector(b, "upper", lower.shape[0])
    try:
        bounds = Bounds(lower, upper)
    except ValueError as e:
        raise ScenarioError("bounds", str(e)) from None
    spec = data.get("environment")
    if not isinstance(spec, dict):
        raise ScenarioError("environment", "missing")
    try:
        env = environment_from_dict(spec, bounds, base_dir)
    except (KeyError, TypeError) as e:
        raise ScenarioError("environment", f"missing or malformed field {e}") from None
    except (ValueError, OSError) as e:
        raise ScenarioError("environment", str(e)) from None
    start = _vector(data, "start", bounds.dim)
    goal = _vector(data, "goal", bounds.dim)
    for key, q in (("start", start), ("goal", goal)):
        if env.is_collision(q):
            raise ScenarioError(key, "configuration is in collision or outside the bounds")
    params = dict(data.get("params") or {})
    unknown = set(params) - set(PARAM_KEYS)
    if unknown:
        raise ScenarioError("params", f"unknown keys {sorted(unknown)}")
    try:
        PlannerParams.for_bounds(bounds, **params)
    except (ValueError, TypeError) as e:
        raise ScenarioError("params", str(e)) from None
    return Scenario(name, env, start, goal, params, data.get("description", ""))


def bundled_names() -> list[str]:
    root = resources.files("balltree") / "scenarios"
    return sorted(p.name[: -len(".scenario")] for p in root.iterdir() if p.name.endswith(".scenario"))


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("balltree") / "scenarios" / f"{name}.scenario"))


def load_scenario(path) -> Scenario:
    """Load a scenario file, or a bundled scenario by bare name."""
    p = Path(path)
    if not p.exists() and p.suffix == "" and bundled_path(str(path)).exists():
        p = bundled_path(str(path))
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioError("<file>", f"cannot read {p}: {e}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError("<file>", f"{p} is not valid JSON: {e}") from None
    sc = scenario_from_dict(data, p.parent)
    sc.source = p
    return sc


def save_scenario(scenario: Scenario, path) -> None:
    """Write ``scenario`` as JSON. A relative PGM reference missing from the
    destination directory is written there too, so the file reloads."""
    path = Path(path)
    data = scenario.to_dict()
    pgm = data["environment"].get("pgm")
    if pgm is not None and not Path(pgm).is_absolute():
        target = path.parent / pgm
        if not target.exists():
            write_pgm(target, scenario.env.occupancy)
    path.write_text(json.dumps(data, indent=1) + "\n", encoding="utf-8")
