import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from helpers import no_transfer_plan, transfer_plan  # noqa: E402
from pdpset.instance import illustrative_instance  # noqa: E402

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

@pytest.fixture
def example():
    return illustrative_instance()


@pytest.fixture
def example_plans():
    return no_transfer_plan(), transfer_plan()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)
