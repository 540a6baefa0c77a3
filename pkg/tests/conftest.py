import sys

import numpy as np
import pytest
from hypothesis import settings

from ptdephase import _backend

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

try:
    from ptdephase import _kernels  # noqa: F401
    HAVE_COMPILED = True
except ImportError:
    HAVE_COMPILED = False

BACKENDS = ["python"] + (["compiled"] if HAVE_COMPILED else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    """Run a test once per available kernel backend."""
    previous = _backend.BACKEND
    _backend.use(request.param)
    yield request.param
    _backend.use(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
        terminalreporter.write_line(line)
