import zlib

import numpy as np
import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def rng(request):
    # one reproducible stream per test
    return np.random.default_rng(zlib.crc32(request.node.name.encode()))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
