import sys

import numpy as np
import pytest

from glauber_su2.scenario import Tabulated


def random_tabulated(rng, t_end=6.0, n=13):
    """Smooth-ish random drive sampled on a uniform grid."""
    ts = np.linspace(0.0, t_end, n)
    Om = rng.uniform(-1.5, 1.5) + 0.5 * rng.standard_normal(n)
    wr = rng.uniform(0.05, 0.8) + 0.2 * rng.standard_normal(n)
    wi = 0.3 * rng.standard_normal(n)
    return Tabulated(ts, Om, wr, wi)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = mod.summary_lines() if mod is not None else []
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
