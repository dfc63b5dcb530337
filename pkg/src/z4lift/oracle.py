"""Independent slow checks: ghost components, greedy correction, tiny breaks.

Nothing here is on the certification path of :mod:`z4lift.lift`; these
routines re-derive or cross-check its ingredients by different means.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

import sympy

from .dyadic import DyadicPolynomial, DyadicRationalFunction, RingConfig, teichmuller
from .errors import (
    InvalidParameter,
    MismatchError,
    NonTermination,
    PrecisionExhausted,
    TrivialCharacter,
    ValueGroupObstruction,
)
from .gf2x import GF, Polynomial, RationalFunction, _clmul, is_square
from .swan import Zero, degeneration_order2
from .witt import WittVector2, asw_coboundary, reduce_witt, witt_add, witt_neg


# --------------------------------------------------------------------------
# ghost components


@dataclass(frozen=True)
class GhostVector:
    w1: object
    w2: object

    @classmethod
    def of(cls, x1, x2):
        return cls(x1, x1 ** 2 + 2 * x2)

    def __add__(self, other):
        return GhostVector(self.w1 + other.w1, self.w2 + other.w2)


@dataclass(frozen=True)
class WittConstants:
    sum_integral: tuple
    neg_integral: tuple
    sum_mod2: tuple
    neg_mod2: tuple
    wp_mod2: tuple


def _mod2(expr, gens):
    return sympy.Poly(sympy.expand(expr), *gens, modulus=2)


def derive_witt_constants() -> WittConstants:
    """Solve the ghost equations for sum and negation over Q, then reduce mod 2."""
    X1, X2, Y1, Y2, S1, S2, N1, N2, H1, H2 = sympy.symbols("X1 X2 Y1 Y2 S1 S2 N1 N2 H1 H2")
    gx, gy = GhostVector.of(X1, X2), GhostVector.of(Y1, Y2)
    total = gx + gy
    s1 = sympy.solve(sympy.Eq(S1, total.w1), S1)[0]
    s2 = sympy.solve(sympy.Eq(s1 ** 2 + 2 * S2, total.w2), S2)[0]
    n1 = sympy.solve(sympy.Eq(N1, -gx.w1), N1)[0]
    n2 = sympy.solve(sympy.Eq(n1 ** 2 + 2 * N2, -gx.w2), N2)[0]
    s2, n2 = sympy.expand(s2), sympy.expand(n2)
    for poly in (s2, n2):
        if any(c.q != 1 for c in sympy.Poly(poly, X1, X2, Y1, Y2).coeffs()):
            raise MismatchError(f"structure polynomial {poly} is not integral")
    sgens, ngens = (X1, X2, Y1, Y2), (X1, X2)
    # wp(h) = F(h) - h with F(h1, h2) = (h1^2, h2^2) modulo 2
    neg_h = (n1.subs({X1: H1}), n2.subs({X1: H1, X2: H2}))
    wp2 = s2.subs({X1: H1 ** 2, X2: H2 ** 2, Y1: neg_h[0], Y2: neg_h[1]}, simultaneous=True)
    wp1 = s1.subs({X1: H1 ** 2, Y1: neg_h[0]}, simultaneous=True)
    return WittConstants(
        sum_integral=(s1, s2),
        neg_integral=(n1, n2),
        sum_mod2=(_mod2(s1, sgens), _mod2(s2, sgens)),
        neg_mod2=(_mod2(n1, ngens), _mod2(n2, ngens)),
        wp_mod2=(_mod2(wp1, (H1, H2)), _mod2(wp2, (H1, H2))),
    )


def _eval_mod2(poly, values, F):
    """Evaluate a mod-2 sympy Poly at field elements of F."""
    acc = 0
    for monom, coeff in poly.terms():
        if int(coeff) % 2 == 0:
            continue
        term = 1
        for x, e in zip(values, monom):
            term = F.mul(term, F.pow(x, e))
        acc ^= term
    return acc


def ghost_witt_oracle(fields=(1, 2)):
    """Check the gf2x Witt operations against ghost-derived polynomials.

    Every pair of vectors with coordinates in F_2 (and by default F_4) is
    compared for sum, negation and wp.  Raises MismatchError on any
    difference and returns the derived constants otherwise.
    """
    consts = derive_witt_constants()
    for d in fields:
        F = GF(d)
        const = lambda a: RationalFunction.constant(F, a)  # noqa: E731
        for a1, a2, b1, b2 in itertools.product(F.elements(), repeat=4):
            u, v = WittVector2(const(a1), const(a2)), WittVector2(const(b1), const(b2))
            got = witt_add(u, v)
            want = tuple(_eval_mod2(p, (a1, a2, b1, b2), F) for p in consts.sum_mod2)
            if (got.f1, got.f2) != tuple(map(const, want)):
                raise MismatchError(f"sum mismatch at {u.render()} + {v.render()}")
        for a1, a2 in itertools.product(F.elements(), repeat=2):
            u = WittVector2(const(a1), const(a2))
            got = witt_neg(u)
            want = tuple(_eval_mod2(p, (a1, a2), F) for p in consts.neg_mod2)
            if (got.f1, got.f2) != tuple(map(const, want)):
                raise MismatchError(f"negation mismatch at {u.render()}")
            got = asw_coboundary(u)
            want = tuple(_eval_mod2(p, (a1, a2), F) for p in consts.wp_mod2)
            if (got.f1, got.f2) != tuple(map(const, want)):
                raise MismatchError(f"wp mismatch at {u.render()}")
    return consts


# --------------------------------------------------------------------------
# greedy correcting search


def lift_function(ring: RingConfig, f: RationalFunction) -> DyadicRationalFunction:
    """Coefficientwise Teichmueller lift of a residue rational function."""

    def lift(P: Polynomial):
        n = max(P.exponents(), default=-1)
        return DyadicPolynomial(ring, [teichmuller(ring, P.coeff(k)) for k in range(n + 1)])

    return DyadicRationalFunction(lift(f.num), lift(f.den))


def greedy_correcting_search(F: DyadicRationalFunction, max_steps: int | None = None):
    """Find a certifying H by eliminating square residues, return (H, type).

    At nu(F - H^2) = 2 one more step trades even-order pole terms of the
    residue for their square roots, so the returned reduction is reduced.
    """
    ring = F.ring
    max_steps = ring.N if max_steps is None else max_steps
    H = DyadicRationalFunction.constant(ring, 1)
    for _ in range(max_steps):
        D = F - H * H
        if D.is_exact_zero():
            raise TrivialCharacter("F is the square of the search iterate")
        v = D.gauss_vpi()
        g = D.leading_residue()
        if v >= 8:
            if v == 8:
                h = reduce_witt(WittVector2(g, RationalFunction.zero(g.field)))[1].f1
                if not h.is_zero():
                    H = H + 2 * lift_function(ring, h)
            return H, degeneration_order2(F, H)
        if not is_square(g):
            return H, degeneration_order2(F, H)
        if v % 2:
            raise ValueGroupObstruction(f"nu = {v}/4 would need a correction of valuation {v}/8")
        H = H + ring.pi ** (v // 2) * lift_function(ring, g.sqrt())
    raise NonTermination(f"no certifying H after {max_steps} steps")


@dataclass(frozen=True, eq=False)
class PlantedCharacter:
    F: DyadicRationalFunction
    depth: object
    g: RationalFunction
    H0: DyadicRationalFunction


def _random_laurent(rng, F, max_pole, need_odd, odd_only=False):
    while True:
        terms = {-k: rng.randrange(F.order) for k in range(1, max_pole + 1) if k % 2 or not odd_only}
        terms = {k: c for k, c in terms.items() if c}
        if terms and (not need_odd or any(k % 2 for k in terms)):
            return RationalFunction.from_laurent(F, terms)


def planted_character(ring: RingConfig, depth, rng: random.Random) -> PlantedCharacter:
    """F = H0^2 (1 + 4 g~ / 2^depth) with a planted non-square residue g."""
    from fractions import Fraction

    depth = Fraction(depth)
    F = ring.field
    # at depth 0 the class of g must be nontrivial, so plant a reduced g
    g = _random_laurent(rng, F, 5, need_odd=True, odd_only=depth == 0)
    choices = [k for k in (1, 2, 3) if Fraction(k, 2) < 2 - depth]
    H0 = DyadicRationalFunction.constant(ring, 1)
    if choices:
        k = rng.choice(choices)
        H0 = H0 + ring.pi ** k * lift_function(ring, _random_laurent(rng, F, 3, need_odd=False))
    scale = ring.const(4).divide_by_pi(int(4 * depth))
    Fn = H0 * H0 * (1 + scale * lift_function(ring, g))
    return PlantedCharacter(Fn, depth, g, H0)


def planted_suite(ring: RingConfig, count: int, seed: int):
    """Run the greedy search on ``count`` planted characters; return mismatches."""
    from fractions import Fraction

    from .witt import order2_equivalent

    rng = random.Random(seed)
    depths = [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2)]
    mismatches = []
    for n in range(count):
        c = planted_character(ring, depths[n % len(depths)], rng)
        _, deg = greedy_correcting_search(c.F)
        if deg.depth != c.depth:
            mismatches.append((n, c, deg))
        elif c.depth == 0 and not (isinstance(deg, Zero) and order2_equivalent(deg.reduction.f1, c.g)):
            mismatches.append((n, c, deg))
    return mismatches


# --------------------------------------------------------------------------
# ramification breaks from first principles


def _series_mul(a: int, b: int, prec: int) -> int:
    return _clmul(a, b) & ((1 << prec) - 1)


def _series_inv(a: int, prec: int) -> int:
    """Inverse of a unit power series over F_2 (bit k = coefficient of z^k)."""
    if not a & 1:
        raise ValueError("series is not a unit")
    inv = 1
    for k in range(1, prec):
        if (_series_mul(a, inv, k + 1) >> k) & 1:
            inv |= 1 << k
    return inv


def _series_ord(a: int) -> int | None:
    return (a & -a).bit_length() - 1 if a else None


def tiny_breaks_oracle(m1: int, prec: int = 64) -> int:
    """Lower break of y^2 + y = 1/x^m1 from the action on a uniformizer.

    With t = 1/y and z = t/x^q (q = (m1 - 1)/2) one has x + x^(q+1) z = z^2,
    which is solved for x in F_2[[z]].  The involution is y -> y + 1, i.e.
    z -> z/(1 + z x^q), and the break is ord(sigma z - z) - 1.
    """
    if m1 < 1 or m1 % 2 == 0:
        raise InvalidParameter("m1 must be odd and positive")
    q = (m1 - 1) // 2
    z = 0b10
    x = _series_mul(z, z, prec)
    for _ in range(prec):
        xq1 = 1
        for _ in range(q + 1):
            xq1 = _series_mul(xq1, x, prec)
        new = _series_mul(z, z, prec) ^ _series_mul(z, xq1, prec)
        if new == x:
            break
        x = new
    else:
        raise PrecisionExhausted("series for x did not stabilize")
    xq = 1
    for _ in range(q):
        xq = _series_mul(xq, x, prec)
    t = _series_mul(z, xq, prec)
    sigma_z = _series_mul(z, _series_inv(1 ^ t, prec), prec)
    order = _series_ord(sigma_z ^ z)
    if order is None or order >= prec - 1:
        raise PrecisionExhausted(f"sigma(z) - z vanishes to precision z^{prec}")
    return order - 1
