import math
import sys

import numpy as np
import pytest
from hypothesis import strategies as st

from iqdyn.states import SpatialConfig, Statistics

unit = st.floats(0.0, 1.0, allow_nan=False)
angle = st.floats(0.0, 2 * math.pi, allow_nan=False)
stats = st.sampled_from(list(Statistics))


@st.composite
def configs(draw, theta=None, statistics=None):
    l, lp = draw(unit), draw(unit)
    th = draw(angle) if theta is None else theta
    s = draw(stats) if statistics is None else statistics
    return SpatialConfig.from_l(l, lp, th, s)


@st.composite
def populations(draw):
    w = np.array(draw(st.lists(st.floats(0.0, 1.0), min_size=4, max_size=4)))
    if w.sum() < 1e-3:
        w = np.array([1.0, 0, 0, 0])
    return w / w.sum()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_SESSION = {}


def pytest_sessionstart(session):
    import time
    _SESSION["start"] = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    import time
    mod = sys.modules.get("test_acceptance")
    lines = list(getattr(mod, "RESULTS", []))
    if not lines:
        return
    elapsed = time.perf_counter() - _SESSION["start"]
    lines.append(f"[acceptance] 7 suite runtime: {'PASS' if elapsed < 60 else 'FAIL'} | "
                 f"{elapsed:.1f} s (budget 60 s)")
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
