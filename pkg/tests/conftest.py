import pytest

from tensordrazin.example import example_problem
from tensordrazin.modified.problem import derive

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def example_q():
    return derive(example_problem())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
