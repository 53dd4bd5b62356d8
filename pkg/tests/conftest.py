import contextlib
import zlib

import numpy as np
import pytest

from helpers import f1, f2

_CRITERIA = {}


@pytest.fixture
def F1():
    return f1()


@pytest.fixture
def F2():
    return f2()


@pytest.fixture
def rng(request):
    return np.random.default_rng(zlib.crc32(request.node.name.encode()))


@contextlib.contextmanager
def criterion(number, description):
    """Record one acceptance criterion's outcome for the terminal summary."""
    try:
        yield
    except BaseException:
        _CRITERIA[number] = ("FAIL", description)
        raise
    _CRITERIA[number] = ("PASS", description)


@pytest.fixture
def acceptance():
    return criterion


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, description = _CRITERIA[number]
        terminalreporter.write_line(f"[{status}] criterion {number}: {description}")
