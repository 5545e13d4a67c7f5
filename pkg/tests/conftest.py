import os
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from integral_indicators import read_panel_csv

TESTS = Path(__file__).parent
FIXTURES = TESTS / "fixtures"
sys.path.insert(0, str(TESTS))

settings.register_profile("ci", max_examples=60, deadline=None)
settings.register_profile("stress", max_examples=1500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))


def max_rel_dev(a, b):
    """Largest |a - b| / |b| over entries, with exact zeros required to match exactly."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    diff = np.abs(a - b)
    scale = np.abs(b)
    zero = scale == 0
    if np.any(diff[zero] != 0):
        return np.inf
    if (~zero).any():
        return float(np.max(diff[~zero] / scale[~zero]))
    return 0.0


@pytest.fixture(scope="session")
def panel_5x20():
    return read_panel_csv(FIXTURES / "panel_5x20.csv")


@pytest.fixture(scope="session")
def panel_100x52():
    return read_panel_csv(FIXTURES / "panel_100x52.csv")


_CRITERIA = []


class Criterion:
    def __init__(self, name):
        self.name = name
        self.details = []

    def note(self, text):
        self.details.append(text)


@pytest.fixture()
def criterion(request):
    marker = request.node.get_closest_marker("criterion")
    c = Criterion(marker.args[0] if marker else request.node.name)
    request.node._criterion = c
    return c


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    c = getattr(item, "_criterion", None)
    if c is not None and (rep.when == "call" or (rep.when == "setup" and rep.failed)):
        _CRITERIA.append((c.name, rep.passed, "; ".join(c.details)))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _CRITERIA:
        line = f"{'PASS' if ok else 'FAIL'}  {name}"
        terminalreporter.write_line(f"{line}  ({detail})" if detail else line)
