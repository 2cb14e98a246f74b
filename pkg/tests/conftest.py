from __future__ import annotations

import pytest
from hypothesis import settings

from dartree.trees import make_standard

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def ray():
    return make_standard("ray", D=7)


@pytest.fixture(scope="session")
def T20():
    return make_standard("T_n0_0", D=7, n0=2)


@pytest.fixture(scope="session")
def B2():
    return make_standard("binary", D=7, depth=2)


# one line per acceptance criterion, echoed at the end of every run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
