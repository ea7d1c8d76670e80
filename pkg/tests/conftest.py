import sys
from pathlib import Path

import pytest

from reflexlisp import _backend

sys.path.insert(0, str(Path(__file__).parent))

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


@pytest.fixture(params=sorted(_backend.BACKENDS))
def backend(request):
    """Run the test once per available evaluation kernel."""
    previous = _backend.name
    _backend.use(request.param)
    yield request.param
    _backend.use(previous)


@pytest.fixture(scope="session")
def programs_dir():
    return PROGRAMS


# --- acceptance summary ---------------------------------------------------------

_acceptance = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion check")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = getattr(report, "acceptance", None)
    if marker is not None:
        _acceptance.append((marker, report.nodeid, report.outcome))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    m = item.get_closest_marker("acceptance")
    if m is not None:
        report.acceptance = m.args


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), nodeid, outcome in sorted(_acceptance, key=lambda r: (r[0][0], r[1])):
        params = nodeid.partition("[")[2].rstrip("]")
        label = f"{title} [{params}]" if params else title
        terminalreporter.write_line(f"criterion {number}: {'PASS' if outcome == 'passed' else 'FAIL'}  {label}")
