import pytest
from hypothesis import HealthCheck, settings

from ghostseries.dimensions import build_gamma0_model, build_rhobar_model, RhobarSpec

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: dict = {}


@pytest.fixture(scope="session")
def m510():
    return build_gamma0_model(5, 1, 0)


@pytest.fixture(scope="session")
def m230():
    return build_gamma0_model(2, 3, 0)


@pytest.fixture(scope="session")
def m710():
    return build_gamma0_model(7, 1, 0)


@pytest.fixture(scope="session")
def rho13():
    return build_rhobar_model(RhobarSpec(13, 12, False, 1))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
