import pytest
from hypothesis import strategies as st

from z4lift.dyadic import make_ring
from z4lift.gf2x import GF, Polynomial, RationalFunction
from z4lift.witt import WittVector2

FIELDS = [GF(1), GF(2)]


@st.composite
def laurent(draw, field=None, low=-6, high=3):
    """Laurent polynomials in x with poles only at 0 and infinity."""
    F = field or draw(st.sampled_from(FIELDS))
    terms = draw(st.dictionaries(st.integers(low, high), st.integers(0, F.order - 1), max_size=5))
    return RationalFunction.from_laurent(F, terms)


@st.composite
def polynomials(draw, field, max_degree=4):
    coeffs = draw(st.lists(st.integers(0, field.order - 1), max_size=max_degree + 1))
    return Polynomial(field, coeffs)


@st.composite
def rational_functions(draw, field=None, max_degree=3):
    """Arbitrary rational functions with small numerator and denominator."""
    F = field or draw(st.sampled_from(FIELDS))
    num = draw(polynomials(F, max_degree))
    den = draw(polynomials(F, max_degree).filter(lambda p: not p.is_zero()))
    return RationalFunction(num, den)


@st.composite
def witt_vectors(draw, field=None, general=False):
    F = field or draw(st.sampled_from(FIELDS))
    part = rational_functions(F) if general else laurent(F)
    return WittVector2(draw(part), draw(part))


@st.composite
def witt_tuples(draw, n, general=False):
    F = draw(st.sampled_from(FIELDS))
    return tuple(draw(witt_vectors(F, general)) for _ in range(n))


@pytest.fixture(scope="session")
def ring():
    return make_ring(1, 32)


@pytest.fixture(scope="session")
def ring4():
    return make_ring(2, 32)


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
