import sys
from fractions import Fraction

from hypothesis import settings, strategies as st

from thetak.arith import Laurent

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def laurents(draw, lo=-4, hi=6, max_terms=5):
    terms = draw(st.dictionaries(st.integers(lo, hi), small_rationals, max_size=max_terms))
    return Laurent(terms)


def naive_mul(a: Laurent, b: Laurent) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for i, x in a.coeffs.items():
        for j, y in b.coeffs.items():
            out[i + j] = out.get(i + j, Fraction(0)) + x * y
    return {k: v for k, v in out.items() if v}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
