import math

import numpy as np
import pytest

from fdasec.model import ArrayConfig, PhysicalConstants, Scenario

_ACCEPTANCE_LINES = []


@pytest.fixture
def table1_cfg():
    return ArrayConfig(10, 0.05, 3e9, 1e4, constants=PhysicalConstants.paper())


@pytest.fixture
def table1_scn():
    return Scenario(math.radians(40), 30e3, 0.5, 0.5, n_symbols=40, seed=0)


@pytest.fixture
def rng():
    return np.random.default_rng(20191026)


@pytest.fixture
def criterion():
    """Record one acceptance line; the summary is printed at the end of the run."""
    def record(number, name, passed, detail=""):
        status = "PASS" if passed else "FAIL"
        _ACCEPTANCE_LINES.append(f"[{status}] criterion {number:>2}: {name} -- {detail}")
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
