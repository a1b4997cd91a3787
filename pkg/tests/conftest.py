import pytest

from driftbounds.drift import Deterministic, transform_r
from driftbounds.models import CN_CERTIFIED_CLASS, cn_drift_params, cn_norms
from driftbounds import baxendale as bx

THETA, D = 0.5, 1.6226
# Reference operating point, rounded to three digits.
GAMMA, GAMMA_R = 0.915, 0.971


@pytest.fixture(scope="session")
def cn_params():
    return cn_drift_params(THETA, D)


@pytest.fixture(scope="session")
def cn_params_r(cn_params):
    return transform_r(cn_params, 2)


@pytest.fixture(scope="session")
def certs(cn_params, cn_params_r):
    return (bx.certificate(cn_params, GAMMA, CN_CERTIFIED_CLASS),
            bx.certificate(cn_params_r, GAMMA_R, CN_CERTIFIED_CLASS))


@pytest.fixture(scope="session")
def setting2():
    return cn_norms(THETA, D, 2)


@pytest.fixture(scope="session")
def setting1():
    return cn_norms(THETA, D, 1)


@pytest.fixture
def x0_start():
    return Deterministic(1.0)


# Acceptance results collected by tests/test_acceptance.py, echoed at the end of the run.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
