import pytest

from dpillar.topology import TopologyParams


@pytest.fixture
def p63():
    return TopologyParams(6, 3)


@pytest.fixture
def p44():
    return TopologyParams(4, 4)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number][1])
