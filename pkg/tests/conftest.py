import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from _corpus import build_corpus  # noqa: E402

_CRITERIA = {}
_NOTES = []
_START = []
SUITE_BUDGET = 60.0


def pytest_sessionstart(session):
    _START.append(time.perf_counter())


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(number, title): acceptance criterion reported in the summary")


@pytest.fixture
def note():
    """Append a line to the acceptance summary."""
    return _NOTES.append


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    ok, _ = _CRITERIA.get(number, (True, title))
    if report.failed or (report.when == "call" and report.skipped):
        ok = False
    _CRITERIA[number] = (ok, title)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    elapsed = time.perf_counter() - _START[0]
    for number in sorted(_CRITERIA):
        ok, title = _CRITERIA[number]
        if number == 8:
            # the runtime clause covers the whole session, so it is judged here
            ok = ok and elapsed < SUITE_BUDGET
            title = f"{title} [session {elapsed:.1f} s, budget {SUITE_BUDGET:.0f} s]"
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
    for line in _NOTES:
        terminalreporter.write_line(f"  note: {line}")
