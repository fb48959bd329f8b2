import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from balltree.bench import (
    CSV_COLUMNS,
    StatsRow,
    TrialRecord,
    emit_results,
    format_table,
    rows_from_csv,
    rows_from_json,
    rows_to_csv,
    rows_to_json,
    run_trials,
    summarize,
    worker_count,
)
from balltree.planners import Outcome, PlanResult, Variant
from balltree.scenario import load_scenario
from oracles import stats_oracle


def rec(t, nodes=10, solved=True, seed=0):
    r = PlanResult(Outcome.SOLVED if solved else Outcome.ITERATION_LIMIT, None, nodes, 0, wall_time=t)
    return TrialRecord(seed, Variant.INEXACT, r)


def test_summarize_example():
    row = summarize([rec(1.0, 4), rec(2.0, 6), rec(3.0, 8)], "p")
    assert row.mean_time_s == 2.0 and row.median_time_s == 2.0
    assert row.std_time_s == pytest.approx(math.sqrt(2 / 3))
    assert (row.min_time_s, row.max_time_s) == (1.0, 3.0)
    assert row.mean_nodes == 6.0 and row.success_rate == 1.0
    assert row.algorithm == "InexactBall"


def test_summarize_only_counts_solved():
    row = summarize([rec(1.0, 4), rec(50.0, 1000, solved=False)], "p")
    assert row.success_rate == 0.5
    assert row.mean_time_s == 1.0 and row.mean_nodes == 4.0


def test_summarize_nothing_solved():
    row = summarize([rec(1.0, solved=False), rec(2.0, solved=False)], "p", "RrtConnect")
    assert row.success_rate == 0.0
    assert row.mean_time_s is None and row.mean_nodes is None and row.std_time_s is None
    assert rows_to_csv([row]).splitlines()[1] == "p,RrtConnect,,,,,,,0.0"


def test_summarize_empty_rejected():
    with pytest.raises(ValueError):
        summarize([])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0, 1e4, allow_nan=False), min_size=1, max_size=40))
def test_summarize_matches_oracle(times):
    row = summarize([rec(t, seed=i) for i, t in enumerate(times)])
    mean, median, std, lo, hi = stats_oracle(times)
    assert row.mean_time_s == pytest.approx(mean, rel=1e-9, abs=1e-9)
    assert row.median_time_s == pytest.approx(median, rel=1e-12, abs=1e-12)
    assert row.std_time_s == pytest.approx(std, rel=1e-6, abs=1e-6)
    assert (row.min_time_s, row.max_time_s) == (lo, hi)


def test_csv_header_is_frozen():
    assert rows_to_csv([]) == (
        "problem,algorithm,mean_time_s,median_time_s,std_time_s,min_time_s,max_time_s,mean_nodes,success_rate\n"
    )
    assert CSV_COLUMNS[0] == "problem" and CSV_COLUMNS[-1] == "success_rate"


def test_csv_and_json_round_trip(tmp_path):
    rows = [summarize([rec(0.1, 3), rec(0.3, 5)], "a"), summarize([rec(1, solved=False)], "b", "RrtConnect")]
    assert rows_from_csv(rows_to_csv(rows)) == rows
    assert rows_from_json(rows_to_json(rows)) == rows
    assert json.loads(rows_to_json(rows))["std"] == "population"
    p = emit_results(rows, tmp_path / "r.json", "json")
    assert rows_from_json(p.read_text()) == rows
    with pytest.raises(ValueError):
        emit_results(rows, tmp_path / "r.x", "xml")


def test_no_timing_blanks_time_columns():
    row = summarize([rec(0.1, 3), rec(0.3, 5)], "a")
    line = rows_to_csv([row], timing=False).splitlines()[1]
    assert line == "a,InexactBall,,,,,,4.0,1.0"
    d = json.loads(rows_to_json([row], timing=False))["rows"][0]
    assert d["mean_time_s"] is None and d["mean_nodes"] == 4.0


def test_csv_rejects_foreign_header():
    with pytest.raises(ValueError):
        rows_from_csv("a,b\n1,2\n")


def test_format_table_lists_rows():
    row = StatsRow("p", "RrtConnect", 0.5, 0.5, 0.0, 0.5, 0.5, 12.0, 1.0)
    out = format_table([row]).splitlines()
    assert out[0].split()[0] == "problem" and out[1].split()[:2] == ["p", "RrtConnect"]


def test_run_trials_seeds_and_determinism(monkeypatch):
    sc = load_scenario("gapwall")
    a = run_trials(sc, "inexact", 4, base_seed=7)
    assert [r.seed for r in a] == [7, 8, 9, 10]
    monkeypatch.setenv("BALLTREE_THREADS", "3")
    b = run_trials(sc, "inexact", 4, base_seed=7)
    assert [r.result.counters() for r in a] == [r.result.counters() for r in b]
    with pytest.raises(ValueError):
        run_trials(sc, "inexact", 0)


def test_worker_count(monkeypatch):
    monkeypatch.setenv("BALLTREE_THREADS", "8")
    assert worker_count(3) == 3
    monkeypatch.setenv("BALLTREE_THREADS", "2")
    assert worker_count(30) == 2
