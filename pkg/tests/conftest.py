from collections import OrderedDict

import pytest

_results: "OrderedDict[str, bool]" = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion this test checks")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and not report.failed:
        return
    key = str(marker.args[0])
    _results[key] = _results.get(key, True) and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for key, ok in _results.items():
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}")
