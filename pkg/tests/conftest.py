import numpy as np
import pytest

from helpers import dichotomous


@pytest.fixture
def dim4():
    """H_A(+) = {e1,e2}, H_B(+) = {e1,e3}."""
    return dichotomous([1, 2], [3, 4], 4), dichotomous([1, 3], [2, 4], 4)


@pytest.fixture
def dim5():
    return dichotomous([1, 2, 3], [4, 5], 5), dichotomous([1, 2], [3, 4, 5], 5)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
