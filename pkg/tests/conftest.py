import pytest
from hypothesis import HealthCheck, settings

from ionspin import yb171

settings.register_profile("ionspin", deadline=None, max_examples=50,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ionspin")

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def yb():
    return yb171()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
