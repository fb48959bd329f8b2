import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# nodeid -> (number, title, detail lines); filled by the ``criterion_note`` fixture
_NOTES: dict = {}
_RESULTS: dict = {}


@pytest.fixture
def criterion_note(request):
    lines = []
    _NOTES[request.node.nodeid] = lines
    return lines.append


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        n, title = mark.args
        _RESULTS[n] = (title, "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL"), item.nodeid)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_RESULTS):
        title, status, nodeid = _RESULTS[n]
        tr.write_line(f"[{status}] criterion {n:2d}: {title}")
        for line in _NOTES.get(nodeid, []):
            tr.write_line(f"            {line}")
