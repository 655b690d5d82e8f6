import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from seqprod.effects import validate_effect  # noqa: E402

LN4 = np.log(4.0)


@pytest.fixture
def a_diag():
    return validate_effect(np.diag([0.25, 1.0]))


@pytest.fixture
def b_proj():
    return validate_effect(np.full((2, 2), 0.5))


_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Collects one status line per acceptance criterion for the terminal summary."""
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
