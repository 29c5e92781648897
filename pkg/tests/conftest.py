from __future__ import annotations

import pytest

from ontotwin.harness import build_warehouses
from ontotwin.ontology import TEMPLATE_IDS, template_snapshot
from ontotwin.simulator import run_simulation
from ontotwin.warehouse import populate

# criterion number -> (outcome, title, detail), filled by the report hook below
_CRITERIA: dict[int, tuple[str, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion checked by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n, title = marker.args
    detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        _CRITERIA[n] = (status, title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        status, title, detail = _CRITERIA[n]
        line = f"[{status}] {n:>2}. {title}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def aero():
    return template_snapshot("aerospace")


@pytest.fixture(scope="session")
def aero_log(aero):
    return run_simulation(aero, 42, 30)


@pytest.fixture(scope="session")
def aero_wh(aero, aero_log):
    return populate(aero, aero_log.records)


@pytest.fixture(scope="session")
def short_wh(aero):
    """Small aerospace warehouse for tests that only need some rows."""
    return populate(aero, run_simulation(aero, 7, 5).records)


@pytest.fixture(scope="session")
def all_warehouses():
    return build_warehouses(TEMPLATE_IDS)
