"""Time the numba kernels against their numpy twins, then a full planning run
under each backend (selected with BALLTREE_NUMBA in a child process).

    python benchmarks/bench_kernels.py [--repeat 5] [--no-plan]
"""
import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from balltree.kernels import load_backend
from balltree.scenario import load_scenario


def kernel_cases():
    rng = np.random.default_rng(0)
    bug = load_scenario("bugtrap").env
    arm = load_scenario("arm10").env
    grid = load_scenario("urban").env
    poly = load_scenario("polygons").env
    centers = rng.random((5000, 3)) * 30
    radii = rng.random(5000)
    poses = np.column_stack([rng.random((256, 2)) * 30, rng.uniform(-3, 3, 256)])
    qs = rng.uniform(-1.5, 1.5, (256, 10))
    pts = rng.random((256, 2)) * 170
    return [
        ("nearest_volume n=5000", "nearest_volume", (centers, radii, centers[17] + 0.1, False)),
        ("points_collide m=256", "points_collide", (pts / 8.5, *poly.edges.args)),
        ("rects_collide m=256", "rects_collide", (poses, bug.hx, bug.hy, *bug.edges.args)),
        ("rects_clearance m=256", "rects_clearance", (poses, bug.hx, bug.hy, *bug.edges.args)),
        ("arms_collide m=256", "arms_collide", (qs, *arm._args)),
        ("arms_clearance m=256", "arms_clearance", (qs, *arm._args)),
        ("grid_collide m=256", "grid_collide", (pts, grid.occupancy, 0.0, 0.0, grid.cell_size)),
    ]


def bench_kernels(repeat):
    backends = {name: load_backend(name) for name in ("numpy", "numba")}
    rows = []
    for label, fn, args in kernel_cases():
        times = {}
        for name, mod in backends.items():
            f = getattr(mod, fn)
            f(*args)  # compile / warm up
            n, _ = timeit.Timer(lambda: f(*args)).autorange()
            times[name] = min(timeit.repeat(lambda: f(*args), number=n, repeat=repeat)) / n
        rows.append((label, times["numpy"], times["numba"]))
    print(f"{'kernel':26s} {'numpy us':>10s} {'numba us':>10s} {'speedup':>8s}")
    for label, t_np, t_nb in rows:
        print(f"{label:26s} {t_np * 1e6:10.1f} {t_nb * 1e6:10.1f} {t_np / t_nb:8.1f}")


PLAN_SNIPPET = """
import json, time
from balltree import kernels
from balltree.scenario import load_scenario
from balltree.planners import plan
sc = load_scenario({name!r})
plan(sc.env, sc.start, sc.goal, sc.planner_params("inexact", seed=99))  # warm up
t = time.perf_counter()
r = plan(sc.env, sc.start, sc.goal, sc.planner_params("inexact", seed={seed}))
print(json.dumps(dict(backend=kernels.BACKEND, nodes=r.total_nodes, checks=r.collision_checks,
                      outcome=r.outcome.value, seconds=time.perf_counter() - t)))
"""


def bench_plans(scenarios, seed):
    print(f"\n{'scenario':10s} {'backend':8s} {'outcome':>9s} {'nodes':>7s} {'checks':>9s} {'seconds':>9s}")
    for name in scenarios:
        for flag in ("0", "1"):
            env = dict(os.environ, BALLTREE_NUMBA=flag)
            out = subprocess.run([sys.executable, "-c", PLAN_SNIPPET.format(name=name, seed=seed)],
                                 env=env, capture_output=True, text=True, check=True)
            r = json.loads(out.stdout.strip().splitlines()[-1])
            print(f"{name:10s} {r['backend']:8s} {r['outcome']:>9s} {r['nodes']:7d} {r['checks']:9d} {r['seconds']:9.3f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--no-plan", action="store_true")
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--scenarios", default="polygons,urban,bugtrap,arm10")
    args = ap.parse_args()
    bench_kernels(args.repeat)
    if not args.no_plan:
        bench_plans(args.scenarios.split(","), args.seed)


if __name__ == "__main__":
    main()
