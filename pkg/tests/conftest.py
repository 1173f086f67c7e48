import numpy as np
import pytest

from serreswan import make_algebra, make_module

# Filled by tests/test_acceptance.py, echoed at the end of the session.
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def shape():
    return make_algebra([2, 3])


@pytest.fixture
def mshape(shape):
    return make_module(shape, [3, 1])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
