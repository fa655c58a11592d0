import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from trilnd.fixtures import all_fixtures  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def fixtures():
    return all_fixtures()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
