import os
from fractions import Fraction

import hypothesis
import hypothesis.strategies as st
import pytest

from nucleo.game import validate_game

hypothesis.settings.register_profile("nucleo", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "nucleo"))

ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def acceptance_report():
    def record(name, ok, detail=""):
        ACCEPTANCE_RESULTS[name] = (bool(ok), detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


@st.composite
def games(draw, max_n=6, max_weight=5):
    n = draw(st.integers(1, max_n))
    weights = draw(st.lists(st.integers(0, max_weight), min_size=n, max_size=n))
    if sum(weights) == 0:
        weights[0] = 1
    quota = draw(st.integers(1, sum(weights)))
    return validate_game(weights, quota)


@st.composite
def imputations(draw, n):
    ks = draw(st.lists(st.integers(0, 6), min_size=n, max_size=n).filter(lambda ks: sum(ks) > 0))
    return tuple(Fraction(k, sum(ks)) for k in ks)


@st.composite
def game_and_imputation(draw, max_n=6, max_weight=5):
    g = draw(games(max_n, max_weight))
    return g, draw(imputations(g.n))
