from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from nequery.pcalc import plan_p
from nequery.plan import Amplify, Base, Iterate, Lift, depth, dimension

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES = []


@st.composite
def plans(draw, max_depth=2, max_dim=64, max_steps=5, max_c=3):
    """Random well-formed plans within a depth and dimension budget."""
    plan = Base()
    for _ in range(draw(st.integers(0, max_steps))):
        move = draw(st.sampled_from(["iterate", "amplify", "lift"]))
        if move == "iterate" and depth(plan) < max_depth and 3 * dimension(plan) <= max_dim:
            plan = Iterate(plan)
        elif move == "amplify":
            plan = Amplify(plan, draw(st.integers(2, max_c)))
        elif move == "lift" and dimension(plan) < max_dim:
            p = plan_p(plan)
            if p < 1:
                j = draw(st.integers(1, 8))
                plan = Lift(plan, p + (1 - p) * Fraction(j, 8))
    return plan


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
