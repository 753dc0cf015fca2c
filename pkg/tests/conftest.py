import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ptilt.workbench import Options, open_session  # noqa: E402

CORPUS = ("k", "A2", "EX1", "A3")

# lines written by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def sessions():
    return {nm: open_session(nm, Options()) for nm in CORPUS}


@pytest.fixture(scope="session")
def ex1(sessions):
    return sessions["EX1"]


@pytest.fixture(scope="session")
def a2(sessions):
    return sessions["A2"]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
