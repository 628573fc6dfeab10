from functools import lru_cache

import pytest

from chardisc.discrepancy import build_quadrature
from chardisc.root_system import build_tables

ACCEPTANCE_LINES: list[str] = []


@lru_cache(maxsize=None)
def default_grid(group: str):
    return build_quadrature(build_tables(group))


@pytest.fixture(scope="session")
def grid_for():
    return default_grid


@pytest.fixture(params=["A1", "A2", "C2", "G2"])
def required_group(request):
    return build_tables(request.param)


@pytest.fixture(params=["A1", "A2", "C2", "G2", "A3", "B3", "C3"])
def any_group(request):
    return build_tables(request.param)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
