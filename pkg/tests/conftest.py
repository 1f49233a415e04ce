from fractions import Fraction

import pytest
from hypothesis import strategies as st

from mdlab.valuations import Valuation

EPS_VALUES = [Fraction(2), Fraction(1), Fraction(1, 2), Fraction(1, 10)]


@st.composite
def valuations(draw, m=None, max_m=8, vmax=50):
    if m is None:
        m = draw(st.integers(1, max_m))
    k = draw(st.integers(1, m))
    chain = sorted(draw(st.lists(st.integers(0, vmax), min_size=m - 1, max_size=m - 1)))
    spike = draw(st.integers(0, vmax))
    return Valuation(m, [0] + chain[: k - 1] + [spike] + chain[k - 1 :], k)


@st.composite
def valuation_pairs(draw, max_m=8, vmax=50):
    m = draw(st.integers(1, max_m))
    return draw(valuations(m=m, vmax=vmax)), draw(valuations(m=m, vmax=vmax))


@pytest.fixture
def worked_pair():
    """The running m=4 instance used throughout the examples."""
    return Valuation(4, [0, 1, 5, 2, 3], 2), Valuation(4, [0, 2, 3, 4, 6], 4)


@pytest.fixture
def tightness_pair():
    v = Valuation(2, [0, 1, 1], 1)
    return v, v


# -- acceptance reporting: one PASS/FAIL line per criterion -------------------

_ACCEPTANCE: dict[int, tuple[str, str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = getattr(item, "acceptance_detail", "")
        _ACCEPTANCE[number] = ("PASS" if report.passed else "FAIL", title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        status, title, detail = _ACCEPTANCE[number]
        line = f"criterion {number}: {status}  {title}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
