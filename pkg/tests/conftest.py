"""Shared fixtures and the acceptance-criterion summary.

Tests marked ``@pytest.mark.acceptance(number, title)`` get one PASS/FAIL line
each in the terminal summary, so a run shows at a glance which exit criteria
hold.
"""

import random

import pytest

from latticeq import quad as Q

_RESULTS = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        number, title = marker.args[0], marker.args[1]
        _RESULTS.append((str(number), title, rep.outcome, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number, title, outcome, dur in sorted(_RESULTS, key=lambda r: (int("".join(c for c in r[0] if c.isdigit())), r[0])):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        tr.write_line(f"[{verdict}] criterion {number}: {title} ({dur:.2f} s)")


def sample_D(rng: random.Random, n: int, margin: float = 0.0):
    """n uniform points of D = {0 <= x <= y <= 1, x + y >= 1} by rejection."""
    out = []
    while len(out) < n:
        x, y = rng.random(), rng.random()
        if x <= y and x + y >= 1 + margin and y <= 1 - margin and x >= margin:
            out.append((x, y))
    return out


@pytest.fixture
def rng():
    return random.Random(20240607)


@pytest.fixture(scope="session")
def special_points():
    """One point per covering and packing case, plus the corners."""
    return [(1.0, 1.0), (2 / 3, 2 / 3), (0.2, 0.9), (0.55, 0.6), (0.7, 0.7), (0.6, 0.8), (0.5, 0.5), (0.3, 0.7), (0.9, 0.9)]


def quad(x, y):
    return Q.quad_polygon(x, y)
