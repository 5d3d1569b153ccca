import math

import numpy as np
import pytest

from casimir_thermo.geometry import RibbonPair, SpherePair
from casimir_thermo.scalar2d import PlanarBodyPair


def direct_polylog(s, z, terms=200):
    """Plain truncated sum, the reference for every polylog test."""
    k = np.arange(1, terms + 1, dtype=float)
    return math.fsum(z ** k / k ** s)


@pytest.fixture
def fig1_blue():
    return RibbonPair.from_widths(2.0, 8.0, 4.0, 1.0, 1.0)


@pytest.fixture
def fig2_orange():
    return RibbonPair.from_widths(1.0, 4.0, 1.0, 2.0, 3.0)


@pytest.fixture
def fig3_blue():
    return SpherePair(1.0, 2.0, 10.0, 11.68, 2.6)


@pytest.fixture
def fig4_pair():
    return SpherePair(1.0, 2.0, 10.0, 1.0, 1.0)


@pytest.fixture
def disks():
    return PlanarBodyPair.disks(1.0, 1.0, 1.0)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
