import re
from collections import OrderedDict

import pytest

_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+?)(?:\[|$)")
_results: "OrderedDict[int, tuple[str, str]]" = OrderedDict()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    match = _CRITERION.match(item.name)
    if not match or item.module.__name__.rsplit(".", 1)[-1] != "test_acceptance":
        return
    if report.when != "call" and not (report.skipped or report.failed):
        return
    number, label = int(match.group(1)), match.group(2).replace("_", " ")
    state = "FAIL" if report.failed else "SKIP" if report.skipped else "PASS"
    previous = _results.get(number, ("PASS", label))[0]
    # worst outcome wins when a criterion spans several tests
    rank = {"PASS": 0, "SKIP": 1, "FAIL": 2}
    _results[number] = (max(previous, state, key=rank.__getitem__), label)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        state, label = _results[number]
        terminalreporter.write_line(f"criterion {number}: {state}  {label}")
