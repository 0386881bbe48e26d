"""Prints one PASS/FAIL line per acceptance criterion at the end of the run."""

import re

_results: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    m = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    k = int(m.group(1))
    if report.when == "call" or report.outcome == "failed":
        outcome = "PASS" if report.passed else "FAIL"
        if k not in _results or outcome == "FAIL":
            _results[k] = (outcome, m.group(2).replace("_", " "))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_results):
        outcome, name = _results[k]
        terminalreporter.write_line(f"{outcome} criterion {k:2d}: {name}")
