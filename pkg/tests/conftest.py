from __future__ import annotations

import random

import pytest

CRITERIA = range(1, 11)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion exercised by the test")
    config.stash[_results_key] = {}


_results_key = pytest.StashKey[dict]()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        results = item.config.stash[_results_key]
        n = marker.args[0]
        results[n] = results.get(n, True) and report.passed


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash[_results_key]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in CRITERIA:
        if n in results:
            terminalreporter.write_line(f"criterion {n}: {'PASS' if results[n] else 'FAIL'}")


@pytest.fixture
def rng():
    return random.Random(20261016)
