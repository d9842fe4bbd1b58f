"""Shared fixtures and the acceptance-summary hook."""

from __future__ import annotations

import numpy as np
import pytest

from maxlinear import (
    DagStructure,
    path_coefficients,
    standardize,
    ten_node_model,
)

# One line per acceptance criterion, filled in by tests/test_acceptance.py and
# echoed at the end of the run so the verdicts are visible in normal output.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def two_node_model() -> np.ndarray:
    """Rows (1/sqrt2, 1/sqrt2), (0, 1): node 2 is the ancestor of node 1."""
    return np.array([[2.0**-0.5, 2.0**-0.5], [0.0, 1.0]])


@pytest.fixture(scope="session")
def diamond_model() -> np.ndarray:
    """d=4 diamond 4 -> {2, 3} -> 1 with distinct edge weights, standardized."""
    dag = DagStructure(4, [(4, 2), (4, 3), (2, 1), (3, 1)])
    w = np.zeros((4, 4))
    for i in range(4):
        w[i, i] = 1.0
    w[1, 3] = 0.9  # 4 -> 2
    w[2, 3] = 0.5  # 4 -> 3
    w[0, 1] = 0.8  # 2 -> 1
    w[0, 2] = 1.2  # 3 -> 1
    return standardize(path_coefficients(dag, w))


@pytest.fixture(scope="session")
def preset_model() -> np.ndarray:
    return ten_node_model()
