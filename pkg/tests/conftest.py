import pytest

from bifcascade.cascade import CascadeSpec, run_cascade
from bifcascade.precision import Precision
from bifcascade.rotation import RotationNumber

# filled by test_acceptance, echoed after the run
ACCEPTANCE_LINES = []

FEIGENBAUM_PRECISION = Precision(30)


def period_doubling(depth, precision=FEIGENBAUM_PRECISION):
    return CascadeSpec((RotationNumber(1, 2),) * depth, precision=precision)


def fast_decay_spec():
    return CascadeSpec((RotationNumber(1, 3), RotationNumber(1, 8), RotationNumber(1, 256)))


@pytest.fixture(scope="session")
def feigenbaum12():
    return run_cascade(period_doubling(12))


@pytest.fixture(scope="session")
def fast_decay():
    return run_cascade(fast_decay_spec())


@pytest.fixture(scope="session")
def pd3():
    return run_cascade(CascadeSpec((RotationNumber(1, 2),) * 3))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
