from __future__ import annotations

import pytest

from qdisc.isotypes import enumerate_catalog

#: one line per acceptance criterion, printed in the terminal summary
acceptance_lines: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def catalog_d1q1():
    return enumerate_catalog(d=1, q=1)


@pytest.fixture(scope="session")
def catalog_d2q1():
    return enumerate_catalog(d=2, q=1)
