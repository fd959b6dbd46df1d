import sys
from fractions import Fraction
from pathlib import Path

from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

POINTS = [Fraction(x) for x in (-2, -1, 0, 1, 2)] + [Fraction(1, 2), Fraction(-3, 2)]

small_rationals = st.builds(
    Fraction, st.integers(-6, 6), st.integers(1, 4)
)
nonzero_rationals = small_rationals.filter(bool)


@st.composite
def factored(draw, points=POINTS, max_exp=3):
    """(const, {point: exponent}) with a few distinct rational points."""
    chosen = draw(st.lists(st.sampled_from(points), max_size=3, unique=True))
    exps = {x: draw(st.integers(-max_exp, max_exp)) for x in chosen}
    return draw(nonzero_rationals), exps



# criterion number -> [title, passed so far], filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            title, ok = ACCEPTANCE[number]
            terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
