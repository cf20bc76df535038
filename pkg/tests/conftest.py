import pytest

from rickard.algebra import Algebra, PiPoint, Splitting, standard_splitting


@pytest.fixture
def split22():
    return standard_splitting(Algebra(2, 2))


@pytest.fixture
def split32():
    return standard_splitting(Algebra(3, 2))


@pytest.fixture
def split22_diag():
    return Splitting(Algebra(2, 2), PiPoint((1, 1)))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number].line())
