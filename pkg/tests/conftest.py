import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from acceptance_log import LINES  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def unit_params():
    from hybridbm import ModelParams
    return ModelParams(mu1=0.0, mu2=0.0, sigma1=1.0, sigma2=1.0)
