import math
import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def catalog():
    from shrinker_lab.catalog import build_catalog
    return {s.name: s for s in build_catalog()}


@pytest.fixture(scope="session")
def networks(catalog):
    from shrinker_lab.geometry import assemble_network
    return {name: assemble_network(sol) for name, sol in catalog.items()}


@pytest.fixture(scope="session")
def exclusion_report():
    from shrinker_lab.catalog import check_exclusions
    return check_exclusions()


@pytest.fixture(scope="session")
def verification():
    from shrinker_lab.verify import run_verification
    return run_verification()


PI = math.pi


# -- acceptance bookkeeping ----------------------------------------------------

_SESSION = {"start": None}
_ACCEPTANCE: list[str] = []


def pytest_sessionstart(session):
    _SESSION["start"] = time.perf_counter()


def pytest_collection_modifyitems(config, items):
    # the suite-runtime criterion has to run last to see the whole session
    last = [it for it in items if it.get_closest_marker("run_last")]
    items[:] = [it for it in items if it not in last] + last


def pytest_configure(config):
    config.addinivalue_line("markers", "run_last: schedule after every other test")


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)


@pytest.fixture
def criterion(request):
    """``criterion(n, ok, detail)`` prints and records one PASS/FAIL line."""
    tr = request.config.pluginmanager.get_plugin("terminalreporter")

    def record(n: int, ok: bool, detail: str):
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
        _ACCEPTANCE.append(line)
        if tr is not None:
            tr.write_line("")
            tr.write_line(line)
        return ok
    return record


@pytest.fixture(scope="session")
def session_elapsed():
    return lambda: time.perf_counter() - _SESSION["start"]
