import pytest

from heckelab.eigenform import shared_table

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def table():
    """Default-size table, N = 2 * 10^4."""
    return shared_table(20_000)


@pytest.fixture(scope="session")
def big_table():
    """N = 10^6, needed for prime sums up to 10^6 and long smoothed sums."""
    return shared_table(10**6)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
