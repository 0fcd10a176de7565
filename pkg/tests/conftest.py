import numpy as np
import pytest

from crossig.modelzoo import build_sinusoid_classifier


@pytest.fixture(scope="session")
def classifier():
    return build_sinusoid_classifier()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
