import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n): acceptance criterion number n")


def pytest_runtest_logreport(report):
    num = dict(report.user_properties).get("criterion")
    if num is None:
        return
    if report.when == "call" or report.outcome != "passed":
        prev = _CRITERIA.get(report.nodeid)
        if prev is None or report.outcome != "passed":
            detail = dict(report.user_properties).get("detail", "")
            _CRITERIA[report.nodeid] = (num, report.outcome, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (num, outcome, detail) in sorted(_CRITERIA.items(), key=lambda kv: (kv[1][0], kv[0])):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        name = nodeid.split("::")[-1]
        terminalreporter.write_line(f"criterion {num:>2} {verdict}  {name}  {detail}")


@pytest.fixture
def criterion(request):
    """Tag a test with its acceptance number; returns a setter for a detail string."""
    marker = request.node.get_closest_marker("acceptance")
    request.node.user_properties.append(("criterion", marker.args[0]))

    def note(text):
        request.node.user_properties.append(("detail", text))
        print(f"criterion {marker.args[0]}: {text}")

    return note


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
