from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from z4lift.dyadic import (
    DyadicNumber,
    DyadicPolynomial,
    DyadicRationalFunction,
    gauss_val,
    is_square_constant,
    is_square_function,
    make_ring,
    newton_polygon,
    parse_function,
    parse_number,
    residue,
    resultant,
    root_valuations,
    separability_check,
    teichmuller,
)
from z4lift.errors import InsufficientPrecision, UnsupportedDegree, ValueNotUnit
from z4lift.gf2x import RationalFunction, parse_rational

R = make_ring(1, 32)
R4 = make_ring(2, 32)


def numbers(ring, lo=-20, hi=20):
    return st.lists(st.integers(lo, hi), min_size=ring.size, max_size=ring.size).map(lambda c: DyadicNumber(ring, c))


def units(ring):
    return numbers(ring).filter(lambda a: not a.is_exact_zero() and a.valuation() == 0)


# ring constants


def test_ring_constants():
    assert R.lam.valuation() == 1
    assert R.sqrt2 * R.sqrt2 == R.two
    assert (R.zeta8 - 1).valuation() == Fraction(1, 4)
    assert (R.i_unit - 1).valuation() == Fraction(1, 2)
    assert R.sqrt2.valuation() == Fraction(1, 2)
    assert R.i_unit * R.i_unit == R.const(-1)
    assert R.pi.valuation() == Fraction(1, 4)
    assert R.e == 4


def test_ring_limits():
    with pytest.raises(UnsupportedDegree):
        make_ring(40, 32)
    with pytest.raises(ValueError):
        make_ring(1, 4)


def test_precision_propagation():
    a = R.pi_power(3) + R.const(1)
    b = a.inverse_unit(16)
    assert not b.is_exact()
    assert (a * b - 1).is_zero_to_precision()
    with pytest.raises(InsufficientPrecision):
        (a * b - 1).vpi()


def test_exact_division_and_pi():
    assert R.const(12).exact_div(R.const(3)) == R.const(4)
    assert R.const(2).divide_by_pi(4).valuation() == 0
    assert R.pi_power(5).divide_by_pi(5) == R.one


def test_division():
    assert R.const(12) / 3 == R.const(4)
    third = R.one / 3
    assert not third.is_exact() and third * 3 == R.one
    assert (R.pi_power(6) / R.pi_power(2)) == R.pi_power(4)
    assert R.const(3) ** -2 * 9 == R.one
    with pytest.raises(ValueNotUnit):
        R.one / R.pi
    with pytest.raises(ZeroDivisionError):
        R.one / R.zero


def test_render_and_serialize():
    x = parse_number(R, "4*(1 + i)")
    assert x.valuation() == Fraction(5, 2)
    assert "pi^10" in x.render()
    assert x.serialize() == {"coords": [4, 0, 4, 0], "prec": "exact"}


# valued rational functions


def test_gauss_val_and_residue_examples():
    assert gauss_val(parse_function(R, "4/X^3")) == 2
    F = parse_function(R, "1 + 4/X")
    assert gauss_val(F) == 0 and residue(F) == RationalFunction.one(R.field)
    G = parse_function(R, "(X^2 + 2*X + 4*i)/X")
    assert residue(G) == parse_rational("x")
    with pytest.raises(ValueNotUnit):
        residue(parse_function(R, "2/X"))


def test_rational_function_identity():
    X = DyadicRationalFunction.x(R)
    assert (1 + 2 / X) ** 2 == 1 + 4 / X + 4 / (X * X)
    assert ((1 + 4 / X) / (1 + 4 / X)) == DyadicRationalFunction.constant(R, 1)


# Teichmueller lifts


def test_teichmuller_examples():
    assert teichmuller(R, 0).is_exact_zero()
    assert teichmuller(R, 1) == R.one
    t = teichmuller(R4, R4.field.gen)
    assert t ** 3 == R4.one
    F = R4.field
    for a in F.elements():
        assert teichmuller(R4, F.sqrt(a)) ** 2 == teichmuller(R4, a)
        assert teichmuller(R4, a).residue() == a


def test_teichmuller_multiplicative_d3():
    ring = make_ring(3, 24)
    F = ring.field
    for a in F.elements():
        for b in F.elements():
            lhs = teichmuller(ring, a) * teichmuller(ring, b)
            assert (lhs - teichmuller(ring, F.mul(a, b))).is_zero_to_precision()


# Newton polygons and separability


def test_newton_polygon_examples():
    X = DyadicPolynomial.x(R)
    assert root_valuations(X ** 3 + 4) == [(Fraction(2, 3), 3)]
    assert root_valuations(X ** 2 + 2) == [(Fraction(1, 2), 2)]
    assert sorted(root_valuations(X ** 3 + 2 * X + 4)) == [(Fraction(1, 2), 2), (Fraction(1), 1)]


def test_separability_examples():
    X = DyadicPolynomial.x(R)
    assert separability_check(X ** 3 + 4)
    assert not separability_check((X - 2) ** 2)
    assert separability_check(X ** 2 - 2 * X + R.const(3))


def test_resultant_matches_discriminant():
    X = DyadicPolynomial.x(R)
    # Res(x^3 + c, 3x^2) = 27 c^2
    assert resultant(X ** 3 + 4, (X ** 3 + 4).derivative()) == R.const(27 * 16)


def test_newton_polygon_needs_precision():
    X = DyadicPolynomial.x(R)
    vague = DyadicNumber(R, [0] * R.size, prec=4)
    with pytest.raises(InsufficientPrecision):
        newton_polygon(X ** 2 + DyadicPolynomial.constant(R, vague))


# squares


@pytest.mark.parametrize("n,expected", [(-1, True), (2, True), (-7, True), (17, True), (5, False), (3, False)])
def test_square_constants(n, expected):
    assert is_square_constant(R.const(n)) is expected


def test_square_constants_misc():
    assert is_square_constant(R.i_unit)
    assert not is_square_constant(R.zeta8)
    assert is_square_constant(R4.const(5)) and is_square_constant(R4.const(-3))


def test_square_functions():
    X = DyadicRationalFunction.x(R)
    assert is_square_function((1 + 2 / X) ** 2)
    assert is_square_function(R.const(-1) * (X + 4) ** 2 / X ** 4)
    assert not is_square_function(1 + 4 / X ** 3)
    assert not is_square_function(R.zeta8 * (1 + 2 / X) ** 2)


# properties


@st.composite
def polys(draw, ring=R, max_degree=4):
    coeffs = draw(st.lists(numbers(ring, -8, 8), min_size=1, max_size=max_degree + 1))
    return DyadicPolynomial(ring, coeffs)


@given(numbers(R), numbers(R))
def test_valuation_multiplicative(a, b):
    if a.is_exact_zero() or b.is_exact_zero():
        return
    assert (a * b).valuation() == a.valuation() + b.valuation()


@given(polys(), polys())
@settings(max_examples=60)
def test_gauss_valuation_multiplicative(P, Q):
    if P.is_exact_zero() or Q.is_exact_zero():
        return
    assert (P * Q).gauss_val() == P.gauss_val() + Q.gauss_val()


@given(units(R), units(R))
def test_residue_morphism_constants(a, b):
    F = R.field
    assert (a * b).residue() == F.mul(a.residue(), b.residue())


@given(polys(), polys())
@settings(max_examples=60)
def test_residue_morphism_functions(P, Q):
    F, G = DyadicRationalFunction(P), DyadicRationalFunction(Q)
    if P.is_exact_zero() or Q.is_exact_zero() or P.gauss_vpi() or Q.gauss_vpi():
        return
    assert residue(F * G) == residue(F) * residue(G)
    S = F + G
    if not S.is_exact_zero() and S.gauss_vpi() == 0:
        assert residue(S) == residue(F) + residue(G)


@given(polys(max_degree=6))
@settings(max_examples=80)
def test_newton_polygon_shape(P):
    if P.is_exact_zero() or P.degree < 1 or P.coeff(0).is_exact_zero():
        return
    poly = newton_polygon(P)
    assert sum(m for _, m in poly) == P.degree
    slopes = [s for s, _ in poly]
    assert slopes == sorted(slopes)


@given(st.integers(0, 3), st.integers(0, 3))
def test_teichmuller_multiplicative_f4(a, b):
    F = R4.field
    assert teichmuller(R4, a) * teichmuller(R4, b) == teichmuller(R4, F.mul(a, b))
