"""Shared strategies and the acceptance summary printed at the end of a run."""
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from dtflop.mring import MotExpr

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

ACCEPTANCE: dict = {}


@st.composite
def mot_exprs(draw, kmax=3, jspan=4, mu=True):
    terms = draw(st.dictionaries(
        st.tuples(st.integers(-jspan, jspan), st.integers(1, kmax if mu else 1)),
        st.integers(-3, 3).map(Fraction), max_size=4))
    return MotExpr.build(terms)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, note = ACCEPTANCE[key]
        terminalreporter.write_line(f"{key}: {'PASS' if ok else 'FAIL'}  {note}")
