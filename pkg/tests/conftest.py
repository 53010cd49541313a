from collections import defaultdict

import pytest

_criteria: dict[int, str] = {}
_outcomes: dict[int, list[bool]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n, title = marker.args
    _criteria[n] = title
    if report.when == "call" or report.failed:
        _outcomes[n].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n in sorted(_criteria):
        results = _outcomes.get(n, [])
        ok = bool(results) and all(results)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {n}: {_criteria[n]}")
