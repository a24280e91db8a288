import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from suslinbench import _kernels_py, kernels

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", deadline=None, max_examples=150,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

KERNEL_NAMES = ("ancestor_table", "lex_matrix", "order_violations", "meet_violations")


def _available_backends():
    out = ["python"]
    try:
        from suslinbench import _kernels  # noqa: F401
        out.append("cython")
    except ImportError:
        pass
    return out


@pytest.fixture(params=_available_backends())
def backend(request, monkeypatch):
    """Route the tree kernels through one backend for the duration of a test."""
    if request.param == "python":
        impl = _kernels_py
    else:
        from suslinbench import _kernels as impl
    for name in KERNEL_NAMES:
        monkeypatch.setattr(kernels, name, getattr(impl, name))
    return request.param


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
