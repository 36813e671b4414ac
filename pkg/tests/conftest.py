"""Shared fixtures and the per-criterion acceptance summary."""

from __future__ import annotations

import time

import pytest

from dads_lab.harness import run_scenario
from helpers import scenario, shortened

_CRITERIA: dict[int, str] = {}
_OUTCOMES: dict[int, list[str]] = {}
_NODE_CRITERION: dict[str, int] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            _CRITERIA[number] = title
            _NODE_CRITERION[item.nodeid] = number


def pytest_runtest_logreport(report):
    number = _NODE_CRITERION.get(report.nodeid)
    if number is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _OUTCOMES.setdefault(number, []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        outcomes = _OUTCOMES.get(number, [])
        if not outcomes:
            verdict = "NOT RUN"
        elif all(o == "passed" for o in outcomes):
            verdict = "PASS"
        else:
            verdict = "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {_CRITERIA[number]}")


@pytest.fixture(scope="session")
def pde_default():
    return scenario("pde-default")


@pytest.fixture(scope="session")
def pde_default_run(pde_default):
    """``(trajectory, report, seconds)`` of the default diffusion loop, timed after a warm-up."""
    run_scenario(shortened(pde_default, 0.05))
    start = time.perf_counter()
    traj, report = run_scenario(pde_default)
    return traj, report, time.perf_counter() - start
