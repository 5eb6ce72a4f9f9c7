import functools

import pytest
from hypothesis import settings

from spiral_minimal.solver import SolverConfig, picard_solve

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# filled by test_acceptance; printed at the end of the run
ACCEPTANCE_LINES = {}


@functools.lru_cache(maxsize=None)
def solved(delta: float):
    return picard_solve(SolverConfig(delta=delta))


@pytest.fixture(scope="session")
def solve_cache():
    return solved


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
