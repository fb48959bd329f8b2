"""Seeded multi-trial runs and per-algorithm summary rows."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .planners import PlanResult, Variant, plan
from .scenario import Scenario

CSV_COLUMNS = (
    "problem", "algorithm", "mean_time_s", "median_time_s", "std_time_s",
    "min_time_s", "max_time_s", "mean_nodes", "success_rate",
)
TIME_COLUMNS = CSV_COLUMNS[2:7]


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    variant: Variant
    result: PlanResult


@dataclass(frozen=True)
class StatsRow:
    """One table row. Time and node fields are None when nothing solved.

    ``std_time_s`` is the population standard deviation (divide by n).
    """

    problem: str
    algorithm: str
    mean_time_s: float | None
    median_time_s: float | None
    std_time_s: float | None
    min_time_s: float | None
    max_time_s: float | None
    mean_nodes: float | None
    success_rate: float


def worker_count(n_tasks: int) -> int:
    raw = os.environ.get("BALLTREE_THREADS", "").strip()
    n = int(raw) if raw else (os.cpu_count() or 1)
    return max(1, min(n, n_tasks))


def run_trials(scenario: Scenario, variant, n_trials: int, base_seed: int = 0, audit: bool = False,
               **overrides) -> list[TrialRecord]:
    """Trial ``i`` uses seed ``base_seed + i``; records come back in seed order.

    ``overrides`` replace planner parameters; ``audit`` keeps the planner's
    instrumentation on each result.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be at least 1")
    variant = Variant.parse(variant)
    seeds = [base_seed + i for i in range(n_trials)]
    params = [scenario.planner_params(variant, seed=s, **overrides) for s in seeds]

    def one(p):
        return plan(scenario.env, scenario.start, scenario.goal, p, audit=audit)

    workers = worker_count(n_trials)
    if workers == 1:
        results = [one(p) for p in params]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, params))
    return [TrialRecord(s, variant, r) for s, r in zip(seeds, results)]


def summarize(records, problem: str = "", algorithm: str | None = None) -> StatsRow:
    records = list(records)
    if not records:
        raise ValueError("cannot summarize zero records")
    if algorithm is None:
        algorithm = records[0].variant.value
    solved = [r.result for r in records if r.result.solved]
    rate = len(solved) / len(records)
    if not solved:
        return StatsRow(problem, algorithm, None, None, None, None, None, None, rate)
    times = [r.wall_time for r in solved]
    return StatsRow(
        problem=problem,
        algorithm=algorithm,
        mean_time_s=statistics.fmean(times),
        median_time_s=statistics.median(times),
        std_time_s=statistics.pstdev(times),
        min_time_s=min(times),
        max_time_s=max(times),
        mean_nodes=statistics.fmean(r.total_nodes for r in solved),
        success_rate=rate,
    )


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows, timing: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        d = asdict(row)
        w.writerow(["" if (not timing and c in TIME_COLUMNS) else _cell(d[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def rows_from_csv(text: str) -> list[StatsRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    out = []
    for rec in reader:
        vals = {c: (float(rec[c]) if rec[c] != "" else None) for c in CSV_COLUMNS[2:]}
        out.append(StatsRow(rec["problem"], rec["algorithm"], **vals))
    return out


def rows_to_json(rows, timing: bool = True) -> str:
    out = []
    for row in rows:
        d = asdict(row)
        if not timing:
            d.update({c: None for c in TIME_COLUMNS})
        out.append(d)
    return json.dumps({"std": "population", "rows": out}, indent=1) + "\n"


def rows_from_json(text: str) -> list[StatsRow]:
    names = {f.name for f in fields(StatsRow)}
    return [StatsRow(**{k: v for k, v in d.items() if k in names}) for d in json.loads(text)["rows"]]


def emit_results(rows, path, fmt: str = "csv", timing: bool = True) -> Path:
    """Write ``rows`` as CSV or JSON. ``timing=False`` blanks the time columns."""
    if fmt == "csv":
        text = rows_to_csv(rows, timing)
    elif fmt == "json":
        text = rows_to_json(rows, timing)
    else:
        raise ValueError(f"format must be csv or json, got {fmt!r}")
    p = Path(path)
    p.write_text(text, encoding="utf-8")
    return p


def format_table(rows) -> str:
    """Plain-text table in the column order of the CSV."""
    def f(v):
        if v is None:
            return "-"
        if isinstance(v, float):
            return f"{v:.3g}" if not math.isnan(v) else "nan"
        return str(v)
    cells = [list(CSV_COLUMNS)] + [[f(getattr(r, c)) for c in CSV_COLUMNS] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(CSV_COLUMNS))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in cells)
