"""Acceptance summary: one PASS/FAIL line per criterion at the end of the run."""

import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_outcomes: dict = {}


def pytest_runtest_logreport(report):
    match = _CRITERION.search(report.nodeid)
    if not match:
        return
    key = (int(match.group(1)), match.group(2))
    detail = dict(report.user_properties).get("detail", "")
    prev = _outcomes.get(key)
    if report.when == "call" or report.failed or report.skipped:
        if prev is None or prev[0] == "PASS":
            status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
            _outcomes[key] = (status, detail or (prev[1] if prev else ""))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), (status, detail) in sorted(_outcomes.items()):
        line = f"{status} criterion {num:2d} {name.replace('_', ' ')}"
        terminalreporter.write_line(f"{line}: {detail}" if detail else line)
