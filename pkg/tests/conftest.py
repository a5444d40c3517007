import time

import pytest
from hypothesis import settings

from subuniversal import machines

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def census22():
    return machines.ctm_census(2, 107, (0, 1))


REFERENCE_COUNTS = {27: 847, 54: 1225, 81: 1286, 107: 1302}


@pytest.fixture(scope="session")
def census42():
    """Full TM(4,2) census on both blanks (about a minute)."""
    t0 = time.perf_counter()
    c = machines.ctm_census(4, 107, (0, 1), method="tree")
    c.elapsed = time.perf_counter() - t0
    return c


@pytest.fixture(scope="session")
def census32():
    return machines.ctm_census(3, 21, (0, 1))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
