from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from autinv import Polynomial, PolyMap

# criterion number -> (description, passed, detail); filled by test_acceptance
ACCEPTANCE_RESULTS: dict[int, tuple[str, bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        desc, ok, detail = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {num}. {desc} ({detail})")


coefficients = st.builds(
    Fraction,
    st.integers(min_value=-9, max_value=9),
    st.integers(min_value=1, max_value=6),
).filter(bool)


def polynomials(arity: int, max_terms: int = 6, max_degree: int = 4):
    def build(terms):
        return Polynomial(arity, dict(terms))

    monomials = st.lists(
        st.integers(min_value=0, max_value=max_degree), min_size=arity, max_size=arity
    ).filter(lambda e: sum(e) <= max_degree).map(tuple)
    return st.lists(st.tuples(monomials, coefficients), max_size=max_terms).map(build)


@st.composite
def poly_with_arity(draw, max_arity: int = 3, count: int = 1):
    m = draw(st.integers(min_value=1, max_value=max_arity))
    return m, [draw(polynomials(m)) for _ in range(count)]


@pytest.fixture
def XY():
    return Polynomial.variables(2)


def linear_form_map(a, b, n) -> PolyMap:
    X, Y = Polynomial.variables(2)
    L = (a * X - b * Y) ** n
    return PolyMap([X + L / a, Y + L / b])
