"""Length-two Witt vectors over F_{2^d}(x), ASW classes and ramification breaks.

Structure constants (certified by :func:`z4lift.oracle.ghost_witt_oracle`)::

    (a1, a2) + (b1, b2) = (a1 + b1, a2 + b2 + a1*b1)
               -(a1, a2) = (a1, a2 + a1^2)
          wp(h1, h2)     = (h1^2 + h1, h2^2 + h2 + h1^2 + h1^3)
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidWittInput, NotTotallyRamified, UnsupportedPlace
from .gf2x import RationalFunction


@dataclass(frozen=True)
class WittVector2:
    f1: RationalFunction
    f2: RationalFunction
    reduced: bool = field(default=False, compare=False)

    @classmethod
    def zero(cls, F):
        z = RationalFunction.zero(F)
        return cls(z, z, reduced=True)

    @property
    def field(self):
        return self.f1.field

    def is_zero(self):
        return self.f1.is_zero() and self.f2.is_zero()

    def render(self):
        return f"({self.f1.render()}, {self.f2.render()})"

    def __str__(self):
        return self.render()

    def __add__(self, other):
        return witt_add(self, other)

    def __sub__(self, other):
        return witt_sub(self, other)

    def __neg__(self):
        return witt_neg(self)


@dataclass(frozen=True)
class BranchData:
    m1: int
    m2: int | None
    conductor: int

    @property
    def breaks(self):
        return (self.m1,) if self.m2 is None else (self.m1, self.m2)


def witt_add(u: WittVector2, v: WittVector2) -> WittVector2:
    return WittVector2(u.f1 + v.f1, u.f2 + v.f2 + u.f1 * v.f1)


def witt_neg(v: WittVector2) -> WittVector2:
    return WittVector2(v.f1, v.f2 + v.f1 * v.f1)


def witt_sub(u: WittVector2, v: WittVector2) -> WittVector2:
    return witt_add(u, witt_neg(v))


def asw_coboundary(h: WittVector2) -> WittVector2:
    """wp(h) = F(h) - h, with F the componentwise Frobenius."""
    s = h.f1 * h.f1
    return WittVector2(s + h.f1, h.f2 * h.f2 + h.f2 + s + s * h.f1)


def _laurent(f: RationalFunction) -> dict:
    if not f.is_laurent():
        raise UnsupportedPlace(f"{f.render()} has a pole away from x = 0 and x = oo")
    return f.laurent_terms()


def _artin_schreier_root(F, c):
    """Some a in F with a^2 + a = c, or None."""
    for a in F.elements():
        if F.mul(a, a) ^ a == c:
            return a
    return None


def _mono(F, e, a):
    return RationalFunction.from_laurent(F, {e: a})


def reduce_witt(u: WittVector2) -> tuple[WittVector2, WittVector2]:
    """Return ``(r, h)`` with ``r`` reduced and ``r = u - wp(h)``.

    Even-order terms ``c x^(2k)`` are traded for ``sqrt(c) x^k`` from the
    outermost order inwards, first in ``f1`` (which feeds into ``f2``
    through the Witt carry) and then in ``f2``.  A constant is removed only
    when it is a wp-image inside F_{2^d}.
    """
    F = u.field
    zero = RationalFunction.zero(F)
    h = WittVector2.zero(F)
    r = u
    for slot in (1, 2):
        while True:
            terms = _laurent(r.f1 if slot == 1 else r.f2)
            even = [e for e in terms if e and e % 2 == 0]
            if even:
                e = max(even, key=abs)
                piece = _mono(F, e // 2, F.sqrt(terms[e]))
            elif 0 in terms and (a := _artin_schreier_root(F, terms[0])) is not None:
                piece = RationalFunction.constant(F, a)
            else:
                break
            step = WittVector2(piece, zero) if slot == 1 else WittVector2(zero, piece)
            r = witt_sub(r, asw_coboundary(step))
            h = witt_add(h, step)
    return WittVector2(r.f1, r.f2, reduced=True), h


def canonical_class(u: WittVector2) -> WittVector2:
    """Reduced representative over the algebraic closure of the constants.

    Over an algebraically closed field every constant is a wp-image, and
    removing a constant ``c`` from the first slot adds ``c * f1`` to the
    second.  The result is unique per ASW class.
    """
    r, _ = reduce_witt(u)
    F = u.field
    t1, t2 = _laurent(r.f1), _laurent(r.f2)
    c1 = t1.pop(0, 0)
    t2.pop(0, None)
    g1 = RationalFunction.from_laurent(F, t1)
    g2 = RationalFunction.from_laurent(F, t2)
    if c1:
        g2 = g2 + g1.scale(c1)
    return WittVector2(g1, g2, reduced=True)


def asw_equivalent(u: WittVector2, v: WittVector2) -> bool:
    return canonical_class(u) == canonical_class(v)


def is_reduced(u: WittVector2) -> bool:
    r, _ = reduce_witt(u)
    return r == u


def _ensure_reduced(u):
    if u.reduced:
        return u
    return reduce_witt(u)[0]


def ramification_breaks(u: WittVector2) -> BranchData:
    """Upper breaks (m1, m2) at x = 0 and the conductor m2 + 1."""
    r = _ensure_reduced(u)
    m1 = r.f1.pole_order_at_zero()
    if m1 == 0:
        raise NotTotallyRamified(f"{r.f1.render()} has no pole at x = 0")
    m2 = max(2 * m1, r.f2.pole_order_at_zero())
    return BranchData(m1, m2, m2 + 1)


def order2_breaks(g: RationalFunction) -> BranchData:
    """Break and conductor of the Artin-Schreier cover y^2 + y = g at x = 0."""
    r = _ensure_reduced(WittVector2(g, RationalFunction.zero(g.field)))
    m1 = r.f1.pole_order_at_zero()
    if m1 == 0:
        raise NotTotallyRamified(f"{g.render()} is unramified at x = 0 after reduction")
    return BranchData(m1, None, m1 + 1)


def validate_phi(u: WittVector2) -> BranchData:
    """Check the normal form (1/x^m1, sum_{i even} a_{n2-i} x^i / x^n2)."""
    f1, f2 = u.f1, u.f2
    if not (f1.num == 1 and f1.is_laurent() and f1.den.degree >= 1):
        raise InvalidWittInput(f"first component {f1.render()} is not of the form 1/x^m1")
    m1 = f1.den.degree
    if m1 % 2 == 0:
        raise InvalidWittInput(f"m1 = {m1} is even")
    if not f2.is_zero():
        if not f2.is_laurent() or f2.den.degree == 0:
            raise InvalidWittInput(f"second component {f2.render()} is not of the form N(x)/x^n2")
        n2 = f2.den.degree
        if n2 % 2 == 0:
            raise InvalidWittInput(f"n2 = {n2} is even")
        if f2.num.degree >= n2:
            raise InvalidWittInput(f"second component {f2.render()} has a polynomial part")
        bad = [i for i in f2.num.exponents() if i % 2]
        if bad:
            raise InvalidWittInput(f"coefficient a_{n2 - bad[0]} sits at odd index i = {bad[0]}")
    data = ramification_breaks(WittVector2(f1, f2, reduced=True))
    assert data.m1 == m1
    return data


def phi_vector(F, m1: int, f2_coefficients: dict) -> WittVector2:
    """The vector (1/x^m1, sum_j a_j / x^j) from an odd-pole-order coefficient map."""
    f1 = _mono(F, -m1, 1)
    f2 = RationalFunction.from_laurent(F, {-j: a for j, a in f2_coefficients.items()})
    return WittVector2(f1, f2)


def reduce_order2(g: RationalFunction) -> RationalFunction:
    """Reduced representative of g in k(x)/wp(k(x)) (length-one ASW class)."""
    return reduce_witt(WittVector2(g, RationalFunction.zero(g.field)))[0].f1


def order2_equivalent(f: RationalFunction, g: RationalFunction) -> bool:
    """Equality of length-one classes over the algebraic closure of the constants."""
    return canonical_class(WittVector2(f + g, RationalFunction.zero(f.field))).f1.is_zero()
