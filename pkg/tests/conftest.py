import math

import numpy as np
import pytest

from spdcprobe.harness import BASELINE_ENV1, BASELINE_ENV2, environment
from spdcprobe.spdc import AngularGrid, DeltaMarginal


@pytest.fixture(scope="session")
def grid():
    return AngularGrid()


@pytest.fixture(scope="session")
def jd45(grid):
    return environment(BASELINE_ENV1, grid).jd


@pytest.fixture(scope="session")
def jd10(grid):
    return environment(BASELINE_ENV2, grid).jd


def gaussian_marginal(s, cell=2.5e-5, half_span=None):
    half_span = half_span or 14 * s
    m = int(round(half_span / cell))
    d = cell * np.arange(-m, m + 1, dtype=float)
    return DeltaMarginal(d, np.exp(-0.5 * (d / s) ** 2) / (s * math.sqrt(2 * math.pi)), cell)


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record a PASS/FAIL line for an acceptance criterion and echo it."""

    def emit(label, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] {label}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return emit


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
