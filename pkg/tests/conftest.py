import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def r32():
    from boundfield.radial import hydrogen_radial
    return hydrogen_radial(3, 2)


_CRITERIA: dict = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "acceptance" not in report.keywords:
        return
    for key, value in report.user_properties:
        if key == "criterion":
            _CRITERIA[report.nodeid] = (value, "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for title, status in sorted(_CRITERIA.values()):
        terminalreporter.write_line(f"{status}  {title}")
