import pytest

from dombzeta.context import PrecisionContext
from dombzeta.exact_sequences import build_table

from _report import LINES as ACCEPTANCE_LINES


@pytest.fixture(scope="session")
def table500():
    return build_table(500)


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext(precision_bits=256, tol_digits=25, trunc=400)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
