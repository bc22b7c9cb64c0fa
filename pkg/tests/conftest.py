import warnings

from hypothesis import HealthCheck, settings

import helpers

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter):
    if helpers.ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in helpers.ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def pytest_configure(config):
    warnings.filterwarnings("ignore", message=".*did not converge.*", category=RuntimeWarning)
