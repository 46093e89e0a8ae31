import numpy as np
import pytest

from entbound.qstate import make_family

ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture(scope="session")
def tiles():
    return make_family("tiles_upb")


DIMS = [(2, 2), (2, 3), (3, 3)]
