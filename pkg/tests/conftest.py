from __future__ import annotations

import pytest

# label -> outcome per test; a criterion passes only if all of its tests pass
_CRITERIA: dict[str, list[bool]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    label = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _CRITERIA.setdefault(label, []).append(report.outcome == "passed")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA, key=lambda s: int(s.split()[0])):
        outcomes = _CRITERIA[label]
        status = "PASS" if all(outcomes) else "FAIL"
        terminalreporter.write_line(f"{status}  criterion {label} ({sum(outcomes)}/{len(outcomes)} checks)")
