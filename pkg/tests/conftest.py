import sys

import pytest
from hypothesis import settings

from msrank.oracle import example1

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

V1, V2, V3 = 0, 1, 2


@pytest.fixture
def ex1():
    return example1()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
