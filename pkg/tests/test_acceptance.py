"""Acceptance suite: one test per criterion, each printing PASS/FAIL in the
terminal summary. Statistical runs are memoized so criteria that share a
run (sparsity, rejection and path validity on the bug trap) pay for it once.

Run alone with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""
import functools
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from balltree.bench import run_trials, summarize
from balltree.cspace import distance
from balltree.planners import Variant, plan
from balltree.scenario import load_scenario
from balltree.tree import BallTree, init_tree
from oracles import ball_samples, brute_nearest, path_is_valid

pytestmark = pytest.mark.slow

TRIALS = 30
# every statistical run the suite made, for the path-validity criterion
_RUNS: dict = {}


@functools.cache
def scenario(name):
    return load_scenario(name)


def trials(name, variant, n=TRIALS, **overrides):
    key = (name, Variant.parse(variant), n, tuple(sorted(overrides.items())))
    if key not in _RUNS:
        _RUNS[key] = run_trials(scenario(name), variant, n, base_seed=0, audit=True, **overrides)
    return _RUNS[key]


def mean_nodes(records):
    return summarize(records).mean_nodes


def rate(records):
    return sum(r.result.solved for r in records) / len(records)


def node_ratio_check(note, name, limit, min_rate):
    rrt, ball = trials(name, "rrt"), trials(name, "inexact")
    ratio = mean_nodes(ball) / mean_nodes(rrt)
    note(f"{name}: ball {mean_nodes(ball):.1f} vs rrt {mean_nodes(rrt):.1f} mean nodes, "
         f"ratio {ratio:.3f} (limit {limit}); success {rate(ball):.2f} / {rate(rrt):.2f} (need {min_rate})")
    assert rate(rrt) >= min_rate and rate(ball) >= min_rate
    assert ratio <= limit


@pytest.mark.criterion(1, "bug-trap sparsity")
def test_bugtrap_sparsity(criterion_note):
    node_ratio_check(criterion_note, "bugtrap", 0.25, 0.9)


@pytest.mark.criterion(2, "10-link arm advantage")
def test_arm_advantage(criterion_note):
    node_ratio_check(criterion_note, "arm10", 0.80, 0.8)


@pytest.mark.criterion(3, "occupancy-grid advantage")
def test_grid_advantage(criterion_note):
    node_ratio_check(criterion_note, "urban", 0.60, 1.0)


@pytest.mark.criterion(4, "exact-variant soundness")
def test_exact_balls_free(criterion_note):
    sc = scenario("polygons")
    rng = np.random.default_rng(2024)
    balls = bad = 0
    for rec in trials("polygons", "exact", n=5):
        for t in rec.result.trees:
            for c, r in zip(t.centers, t.radii):
                balls += 1
                if r > 0 and sc.env.collide(ball_samples(c, r, 100, rng)).any():
                    bad += 1
    criterion_note(f"{balls} balls from 5 exact runs, 100 probes each: {bad} violations")
    assert balls > 0 and bad == 0


@pytest.mark.criterion(5, "rejection soundness")
def test_rejection(criterion_note):
    violations = checked = 0
    for name in ("bugtrap", "arm10", "urban"):
        for rec in trials(name, "inexact"):
            violations += rec.result.audit["sample_violations"]
            checked += rec.result.audit["samples_checked"]
    late_rej = late_all = 0
    for rec in trials("bugtrap", "inexact"):
        flags = rec.result.audit["rejected"]
        late = flags[len(flags) // 2:]
        late_rej += sum(late)
        late_all += len(late)
    frac = late_rej / late_all
    criterion_note(f"{checked} extend-driving samples audited, {violations} inside a tree")
    criterion_note(f"bug trap rejected fraction over the later half of each run: {frac:.3f} (need > 0.30)")
    assert checked > 0 and violations == 0
    assert frac > 0.30


@pytest.mark.criterion(6, "trim correctness")
def test_trim_properties(criterion_note):
    rng = np.random.default_rng(6)
    bad = 0
    for k in range(10_000):
        dim = int(rng.integers(2, 7))
        r0 = float(rng.uniform(0.1, 5.0))
        delta = 0.0 if k % 2 == 0 else float(rng.uniform(0, r0))
        t = init_tree(rng.normal(size=dim), r0, radius_floor=delta)
        prev = r0
        points = []
        for _ in range(int(rng.integers(1, 25))):
            p = t.center(0) + rng.normal(size=dim) * rng.uniform(0, 2 * r0)
            points.append(p)
            r = t.trim(0, distance(t.metric, t.center(0), p), delta)
            if r > prev or r < delta:
                bad += 1
            prev = r
        if delta == 0.0 and any(distance(t.metric, t.center(0), p) < t.radius(0) for p in points):
            bad += 1
    # the same invariant on real runs with zero slack
    inside = events = 0
    for name in ("gapwall", "corridor", "zigzag"):
        for rec in trials(name, "inexact", n=5, delta=0.0):
            for tree, idx, p, old, new in rec.result.audit["trim_events"]:
                events += 1
                inside += distance(tree.metric, tree.center(idx), p) < tree.radius(idx)
    criterion_note(f"10^4 random trim sequences: {bad} violations")
    criterion_note(f"zero-slack planner runs: {events} trim events, {inside} collision points left inside")
    assert bad == 0 and events > 0 and inside == 0


@pytest.mark.criterion(7, "nearest-volume oracle equivalence")
def test_nearest_volume_oracle(criterion_note):
    rng = np.random.default_rng(7)
    mismatches = 0
    for k in range(1000):
        dim = int(rng.integers(2, 5))
        linf = k % 4 == 3
        n = int(rng.integers(1, 40))
        grid = k % 2 == 0  # coarse coordinates force exact ties
        pts = np.round(rng.random((n, dim)) * 4) / 4 if grid else rng.random((n, dim))
        radii = np.round(rng.random(n) * 4) / 8 if grid else rng.random(n) * 0.5
        t = BallTree(pts[0], radii[0], "Linf" if linf else "L2", allow_zero=True)
        for i in range(1, n):
            t.add_node(0, pts[i], radii[i], [pts[0], pts[i]])
        qs = np.round(rng.random((100, dim)) * 4) / 4 if grid else rng.random((100, dim))
        for x in qs:
            if t.nearest_volume(x) != brute_nearest(t.centers, t.radii, x, linf):
                mismatches += 1
    criterion_note(f"10^3 trees x 10^2 queries: {mismatches} mismatches")
    assert mismatches == 0


@pytest.mark.criterion(8, "completeness proxy")
def test_completeness(criterion_note):
    failures = []
    for name in ("empty", "gapwall", "corridor"):
        for v in Variant:
            recs = trials(name, v, n=100, max_iterations=10_000)
            rt = rate(recs)
            criterion_note(f"{name:8s} {v.value:11s} {int(rt * 100)}/100")
            if rt < 1.0:
                failures.append((name, v.value, rt))
    assert not failures


@pytest.mark.criterion(9, "slack condition")
def test_delta_condition(criterion_note):
    width = 1.0
    sweep = (0.1, 0.25, 0.45, 0.5, 0.6, 0.75, 1.0)
    rates = {d: rate(trials("zigzag", "inexact", n=20, delta=d * width)) for d in sweep}
    criterion_note("passage width 1: " + ", ".join(f"delta {d:g} -> {r:.2f}" for d, r in rates.items()))
    assert rates[0.25] == 1.0
    assert all(rates[d] == 1.0 for d in sweep if d <= 0.45)
    assert min(rates[d] for d in sweep if d >= 0.6) < 1.0


def _cli(*args, cwd):
    return subprocess.run([sys.executable, "-m", "balltree.cli", *args], cwd=cwd, capture_output=True, check=False)


@pytest.mark.criterion(10, "determinism")
def test_determinism(criterion_note, tmp_path):
    bench = ["bench", "gapwall", "corridor", "arm10", "--trials", "5", "--base-seed", "7", "--quiet"]
    outs = []
    for k in range(2):
        _cli(*bench, "--no-timing", "--out", f"nt{k}.csv", cwd=tmp_path)
        _cli(*bench, "--out", f"t{k}.csv", cwd=tmp_path)
        r = _cli("plan", "bugtrap", "--seed", "7", "--svg", f"p{k}.svg", cwd=tmp_path)
        outs.append(r.returncode)
    nt = [(tmp_path / f"nt{k}.csv").read_bytes() for k in range(2)]
    timed = [(tmp_path / f"t{k}.csv").read_text().splitlines() for k in range(2)]
    svg = [(tmp_path / f"p{k}.svg").read_bytes() for k in range(2)]

    def untimed(lines):
        return [[c for i, c in enumerate(line.split(",")) if i not in range(2, 7)] for line in lines]

    criterion_note(f"bench --no-timing CSV identical: {nt[0] == nt[1]} ({len(nt[0])} bytes)")
    criterion_note(f"bench CSV identical outside wall-time columns: {untimed(timed[0]) == untimed(timed[1])}")
    criterion_note(f"plan --seed 7 --svg identical: {svg[0] == svg[1]} ({len(svg[0])} bytes)")
    assert outs == [0, 0]
    assert nt[0] == nt[1] and len(nt[0].splitlines()) == 7
    assert untimed(timed[0]) == untimed(timed[1])
    assert svg[0] == svg[1]


@pytest.mark.criterion(11, "path validity")
def test_paths_valid(criterion_note):
    # ordered last so it also sees every run the earlier criteria memoized
    for name in ("bugtrap", "arm10", "urban"):
        for v in ("rrt", "inexact"):
            trials(name, v)
    paths = bad = 0
    for (name, _, _, over), recs in _RUNS.items():
        sc = scenario(name)
        for rec in recs:
            res = rec.result
            if not res.solved:
                continue
            p = sc.planner_params(res.variant, **dict(over))
            ok, why = path_is_valid(sc.env, res.path, p.resolution, sc.start, sc.goal)
            paths += 1
            if not ok:
                bad += 1
                criterion_note(f"{name} seed {rec.seed}: {why}")
    criterion_note(f"{paths} solved paths revalidated at 10x finer resolution: {bad} invalid")
    assert paths > 0 and bad == 0


if __name__ == "__main__":
    sys.exit(pytest.main([str(Path(__file__)), "-q", "-p", "no:cacheprovider"]))
