import numpy as np
import pytest

from ecoplan.state_space import ProblemDims, enumerate_states


@pytest.fixture(scope="session")
def space23():
    return enumerate_states(ProblemDims(2, 3, 12))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
