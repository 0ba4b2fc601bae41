import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gvascope import reference_table1  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def table1():
    return reference_table1()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
