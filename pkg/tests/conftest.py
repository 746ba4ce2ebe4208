from __future__ import annotations

import pytest

# criterion number -> [title, all passed so far, seconds, tests run]
_CRITERIA: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not rep.failed):
        return
    num, title = mark.args
    entry = _CRITERIA.setdefault(num, [title, True, 0.0, 0])
    entry[1] = entry[1] and not rep.failed
    if rep.when == "call":
        entry[2] += rep.duration
        entry[3] += 1


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, ok, secs, count = _CRITERIA[num]
        terminalreporter.write_line(
            f"criterion {num}: {'PASS' if ok else 'FAIL'}  {title}  ({count} tests, {secs:.1f}s)")
