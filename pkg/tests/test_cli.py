import json

import pytest

from balltree import cli
from balltree.environments import PolygonWorld2D


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr()


def test_plan_solved(capsys, tmp_path):
    svg, dump = tmp_path / "a.svg", tmp_path / "a.json"
    code, out = run(capsys, "plan", "gapwall", "--seed", "3", "--svg", str(svg), "--dump-tree", str(dump))
    assert code == 0
    summary = json.loads(out.out)
    assert summary["outcome"] == "Solved" and summary["seed"] == 3
    d = json.loads(dump.read_text())
    assert d["variant"] == "InexactBall" and len(d["trees"]) == 2
    out_svg = tmp_path / "b.svg"
    assert cli.main(["render", str(dump), "gapwall", "--out", str(out_svg)]) == 0
    assert out_svg.read_bytes() == svg.read_bytes()


def test_plan_unsolved_exit_2(capsys):
    code, out = run(capsys, "plan", "zigzag", "--variant", "rrt", "--max-iter", "3")
    assert code == 2
    assert json.loads(out.out)["outcome"] == "IterationLimit"


@pytest.mark.parametrize("argv", [
    ["plan", "no_such_scenario"],
    ["plan", "gapwall", "--variant", "prm"],
    ["plan", "gapwall", "--r0", "-2"],
    ["plan", "gapwall", "--metric", "L7"],
    ["bench", "gapwall", "--variants", ","],
])
def test_invalid_exit_3(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == 3
    assert "invalid input" in out.err


def test_render_bad_dump_exit_3(capsys, tmp_path):
    bad = tmp_path / "d.json"
    bad.write_text('{"trees": 5}')
    code, _ = run(capsys, "render", str(bad), "gapwall", "--out", str(tmp_path / "x.svg"))
    assert code == 3
    code, _ = run(capsys, "render", str(tmp_path / "nope.json"), "gapwall", "--out", str(tmp_path / "x.svg"))
    assert code == 3


def test_exact_without_clearance_exit_4(capsys, monkeypatch):
    monkeypatch.setattr(PolygonWorld2D, "has_clearance", False)
    code, out = run(capsys, "plan", "gapwall", "--variant", "exact")
    assert code == 4
    assert "unsupported" in out.err


def test_bench_writes_csv_and_json(capsys, tmp_path):
    csv_path = tmp_path / "r.csv"
    code, out = run(capsys, "bench", "gapwall", "empty", "--variants", "rrt,exact", "--trials", "3",
                    "--out", str(csv_path))
    assert code == 0 and "problem" in out.out
    lines = csv_path.read_text().splitlines()
    assert lines[0].startswith("problem,algorithm,")
    assert [line.split(",")[:2] for line in lines[1:]] == [
        ["gapwall", "RrtConnect"], ["gapwall", "ExactBall"], ["empty", "RrtConnect"], ["empty", "ExactBall"]]
    js = tmp_path / "r.json"
    assert cli.main(["bench", "empty", "--trials", "2", "--format", "json", "--out", str(js), "--quiet"]) == 0
    assert len(json.loads(js.read_text())["rows"]) == 2


def test_list(capsys):
    code, out = run(capsys, "list")
    assert code == 0 and "bugtrap" in out.out and "arm10" in out.out
