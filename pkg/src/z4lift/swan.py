"""Kummer characters of order 2 and 4 over the valued function field.

Degeneration types follow the refined Swan conductor: an order-2 character
``W^2 = F`` has depth ``2 - nu(F - H^2)`` for a correcting element ``H``;
depth 0 means the character reduces to the Artin-Schreier class of
``[(F - H^2)/4]``.  The correcting ``H`` is always supplied by the caller
(or found by :func:`z4lift.oracle.greedy_correcting_search`); a non-square
residue certifies it.

Residues of ``D/2^nu`` are taken as residues of ``D/pi^(4 nu)``.  Since
``pi^4 = 2u`` with ``u = 1 mod pi`` the two agree for integral ``nu``; for
``nu`` in (1/4)Z they differ by a residue-field constant, which does not
affect squareness or the class of ``dg``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .dyadic import (
    DyadicPolynomial,
    DyadicRationalFunction,
    is_square_function,
    resultant,
    root_valuations,
    separability_check,
)
from .errors import (
    HintNotCertifying,
    InsufficientPrecision,
    NonSeparable,
    TrivialCharacter,
    ValueNotUnit,
)
from .gf2x import DifferentialForm, RationalFunction, is_square
from .witt import (
    WittVector2,
    asw_equivalent,
    order2_breaks,
    order2_equivalent,
    reduce_order2,
    ramification_breaks,
    reduce_witt,
    witt_add,
)

MAX_DEPTH = Fraction(2)  # p/(p-1) for p = 2


# --------------------------------------------------------------------------
# degeneration types


@dataclass(frozen=True)
class Positive:
    depth: Fraction
    dsw: DifferentialForm

    def to_json(self):
        return {"type": "positive", "depth": _frac(self.depth), "dsw": self.dsw.render()}


@dataclass(frozen=True)
class Zero:
    reduction: WittVector2
    order: int = 2
    notes: tuple = field(default=(), compare=False)

    @property
    def depth(self):
        return Fraction(0)

    def to_json(self):
        out = {"type": "zero", "order": self.order, "reduction": [self.reduction.f1.render(), self.reduction.f2.render()]}
        if self.notes:
            out["notes"] = list(self.notes)
        return out


@dataclass(frozen=True)
class Indeterminate:
    """Equal depths whose differentials cancel: only depth < bound is known."""

    bound: Fraction

    def to_json(self):
        return {"type": "indeterminate", "bound": _frac(self.bound)}


DegenerationType = Positive | Zero


def _order2_vector(g):
    return WittVector2(g, RationalFunction.zero(g.field), reduced=True)


def _frac(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


# --------------------------------------------------------------------------
# factored functions (branch-locus bookkeeping)


class FactoredFunction:
    """A rational function kept as ``c * X^k * prod f_j^e_j``.

    Factors are the caller's claim of pairwise distinct, squarefree pieces;
    :func:`branch_locus` certifies that claim with resultants.
    """

    def __init__(self, ring, x_exp=0, factors=(), constant=None):
        self.ring = ring
        self.constant = ring.one if constant is None else ring.coerce(constant)
        merged = {}
        order = []
        for f, e in factors:
            k, g = f.x_adic_split()
            x_exp += k * e
            if g.degree < 1:
                self.constant = self.constant * _const_power(g.coeffs[0], e)
                continue
            key = g.key()
            if key not in merged:
                merged[key] = [g, 0]
                order.append(key)
            merged[key][1] += e
        self.x_exp = x_exp
        self.factors = tuple((merged[k][0], merged[k][1]) for k in order if merged[k][1])

    @classmethod
    def from_function(cls, F: DyadicRationalFunction):
        return cls(F.ring, 0, [(F.num, 1), (F.den, -1)])

    def __mul__(self, other):
        return FactoredFunction(self.ring, self.x_exp + other.x_exp, self.factors + other.factors,
                                self.constant * other.constant)

    def __pow__(self, n: int):
        return FactoredFunction(self.ring, n * self.x_exp, [(f, n * e) for f, e in self.factors],
                                _const_power(self.constant, n))

    def order_at_infinity(self):
        """Order of vanishing in the parameter 1/X."""
        return -(self.x_exp + sum(e * f.degree for f, e in self.factors))

    def expand(self) -> DyadicRationalFunction:
        ring = self.ring
        num = DyadicPolynomial.constant(ring, self.constant)
        den = DyadicPolynomial.constant(ring, 1)
        if self.x_exp >= 0:
            num = num.shift(self.x_exp)
        else:
            den = den.shift(-self.x_exp)
        for f, e in self.factors:
            if e > 0:
                num = num * f ** e
            else:
                den = den * f ** (-e)
        return DyadicRationalFunction(num, den)


def _const_power(c, e):
    if e >= 0:
        return c ** e
    if c == c.ring.one:
        return c
    raise ValueError("negative powers of non-trivial constants are not tracked")


# --------------------------------------------------------------------------
# characters


@dataclass(frozen=True, eq=False)
class Character2:
    """Order-2 Kummer character W^2 = F, with an optional correcting hint."""

    F: DyadicRationalFunction
    hint: DyadicRationalFunction | None = None
    factored: FactoredFunction | None = None

    def __post_init__(self):
        if self.F.num.is_exact() and self.F.den.is_exact() and is_square_function(self.F):
            raise TrivialCharacter(f"{self.F.render()} is a square")

    def factorization(self):
        return self.factored or FactoredFunction.from_function(self.F)


@dataclass(frozen=True, eq=False)
class Character4:
    """Order-4 character W1^2 = F1, W2^2 = W1 * G2.

    ``base`` is the certified reduction of a minimal extension ``W2'^2 = W1 *
    G2min`` of the same order-2 datum, and ``secondary`` is the order-2
    character ``G2 * G2min`` separating the two; together they determine the
    reduction through the combination lemma.
    """

    F1: DyadicRationalFunction
    G2: DyadicRationalFunction
    hint1: DyadicRationalFunction | None = None
    F1_factored: FactoredFunction | None = None
    G2_factored: FactoredFunction | None = None
    base: WittVector2 | None = None
    secondary: Character2 | None = None

    def kummer_datum(self):
        """Factored F1 * G2^2, the datum of W2^4."""
        f1 = self.F1_factored or FactoredFunction.from_function(self.F1)
        g2 = self.G2_factored or FactoredFunction.from_function(self.G2)
        return f1 * g2 ** 2


# --------------------------------------------------------------------------
# order-2 degeneration


def _unit_check(F, what):
    if F.gauss_vpi() != 0:
        raise ValueNotUnit(f"{what} has Gauss valuation {F.gauss_val()}, expected 0")


def degeneration_order2(F: DyadicRationalFunction, hint: DyadicRationalFunction | None = None):
    """Degeneration type of the character W^2 = F with correcting element ``hint``."""
    _unit_check(F, "F")
    if F.num.is_exact() and F.den.is_exact() and is_square_function(F):
        raise TrivialCharacter(f"{F.render()} is a square")
    if hint is None:
        from .oracle import greedy_correcting_search

        return greedy_correcting_search(F)[1]
    _unit_check(hint, "hint")
    D = F - hint * hint
    if D.is_exact_zero():
        raise TrivialCharacter("F equals the square of the hint")
    v = D.gauss_vpi()
    nu = Fraction(v, 4)
    g = D.leading_residue()
    if nu >= 2:
        if nu == 2:
            return Zero(_order2_vector(reduce_order2(g)))
        note = f"nu(F - H^2) = {nu} > 2: depth capped at 0, reduction trivial"
        return Zero(WittVector2.zero(g.field), notes=(note,))
    if is_square(g):
        raise HintNotCertifying(f"residue {g.render()} of (F - H^2)/2^{nu} is a square")
    depth = MAX_DEPTH - nu
    dsw = DifferentialForm.dlog(g) if depth == MAX_DEPTH else DifferentialForm.d(g)
    return Positive(depth, dsw)


@dataclass(frozen=True)
class ReducedForm:
    """F / H^2 = 1 + 4 G / 2^delta, with G of Gauss valuation 0."""

    form: DyadicRationalFunction
    delta: Fraction
    G: DyadicRationalFunction
    degeneration: object


def _divide_by_two_power(F: DyadicRationalFunction, nu: Fraction) -> DyadicRationalFunction:
    """F / (2^floor(nu) * pi^(4 frac(nu))), exact on the numerator."""
    ring = F.ring
    whole = math.floor(nu)
    rest = int(4 * (nu - whole))
    two = ring.const(2 ** whole)
    num = DyadicPolynomial(ring, [c.exact_div(two) for c in F.num.coeffs]) if whole else F.num
    return DyadicRationalFunction(num.divide_by_pi(rest), F.den)


def reduced_form(F: DyadicRationalFunction, H: DyadicRationalFunction) -> ReducedForm:
    deg = degeneration_order2(F, H)
    form = F / (H * H)
    delta = deg.depth
    nu = MAX_DEPTH - delta
    diff = form - 1
    # normalize the denominator so its Gauss valuation is 0
    shift = diff.den.gauss_vpi()
    if shift:
        diff = DyadicRationalFunction(diff.num.divide_by_pi(shift), diff.den.divide_by_pi(shift))
    G = _divide_by_two_power(diff, nu)
    if G.gauss_vpi() != 0:
        raise ValueNotUnit("reduced form coefficient is not a unit")
    if delta > 0 and is_square(G.residue()):
        raise HintNotCertifying("reduced form coefficient has square residue")
    return ReducedForm(form, delta, G, deg)


def combine_degeneration(t1, t2):
    """Degeneration type of the product of two order-2 characters."""
    d1, d2 = t1.depth, t2.depth
    if d1 != d2:
        return t1 if d1 > d2 else t2
    if isinstance(t1, Zero) and isinstance(t2, Zero):
        if t1.order == t2.order == 2:
            # length-one classes add in the first slot; the Witt carry is not part of the class
            return Zero(_order2_vector(reduce_order2(witt_add(t1.reduction, t2.reduction).f1)))
        return Zero(reduce_witt(witt_add(t1.reduction, t2.reduction))[0], order=4)
    omega = t1.dsw + t2.dsw
    if omega.is_zero():
        return Indeterminate(d1)
    return Positive(d1, omega)


# --------------------------------------------------------------------------
# branch locus


@dataclass(frozen=True)
class BranchPoint:
    """``count`` branch points of index ``index`` whose X-coordinates have valuation ``valuation``."""

    valuation: object  # Fraction, or +/- inf for X = 0 / X = oo
    count: int
    index: int

    def specializes_to_zero(self):
        return self.valuation > 0

    def to_json(self):
        v = self.valuation
        text = ("inf" if v > 0 else "-inf") if isinstance(v, float) else _frac(v)
        return {"valuation": text, "count": self.count, "index": self.index}


def _index(e: int, order: int) -> int:
    return order // math.gcd(e, order)


def _certify_distinct(factors):
    for f, _ in factors:
        if f.coeffs[0].is_zero_to_precision():
            raise InsufficientPrecision(f"constant term of {f.render()} is zero to precision")
        if not separability_check(f):
            raise NonSeparable(f"{f.render()} has a repeated root")
    for a in range(len(factors)):
        for b in range(a + 1, len(factors)):
            r = resultant(factors[a][0], factors[b][0])
            if r.is_exact_zero():
                raise NonSeparable(f"{factors[a][0].render()} and {factors[b][0].render()} share a root")
            if r.is_zero_to_precision():
                raise InsufficientPrecision("resultant of two branch factors is zero to precision")


def locus_of(datum: FactoredFunction, order: int) -> list[BranchPoint]:
    """Branch points of W^order = datum; a factor with exponent e has index order/gcd(e, order)."""
    _certify_distinct(datum.factors)
    points = []
    if datum.x_exp % order:
        points.append(BranchPoint(math.inf, 1, _index(datum.x_exp, order)))
    for f, e in datum.factors:
        if e % order == 0:
            continue
        for val, mult in root_valuations(f):
            points.append(BranchPoint(val, mult, _index(e, order)))
    o = datum.order_at_infinity()
    if o % order:
        points.append(BranchPoint(-math.inf, 1, _index(o, order)))
    return _merge(points)


def _merge(points):
    acc = {}
    for p in points:
        key = (p.valuation, p.index)
        acc[key] = acc.get(key, 0) + p.count
    return [BranchPoint(v, c, i) for (v, i), c in sorted(acc.items(), key=lambda kv: (-kv[0][0], kv[0][1]))]


def branch_locus(c) -> list[BranchPoint]:
    if isinstance(c, Character2):
        return locus_of(c.factorization(), 2)
    if isinstance(c, Character4):
        return locus_of(c.kummer_datum(), 4)
    raise TypeError(f"not a character: {c!r}")


def branch_count(points) -> int:
    return sum(p.count for p in points)


# --------------------------------------------------------------------------
# good reduction


@dataclass
class GoodReductionVerdict:
    verdict: bool
    branch_count: int
    expected_conductor: int
    reduction: WittVector2 | None = None
    diagnostics: list = field(default_factory=list)
    points: list = field(default_factory=list)

    def counts_by_index(self):
        out = {}
        for p in self.points:
            out[p.index] = out.get(p.index, 0) + p.count
        return out

    def to_json(self):
        return {
            "verdict": self.verdict,
            "branch_count": self.branch_count,
            "expected_conductor": self.expected_conductor,
            "branch_count_by_index": {str(k): v for k, v in sorted(self.counts_by_index().items())},
            "reduction": None if self.reduction is None else [self.reduction.f1.render(), self.reduction.f2.render()],
            "branch_points": [p.to_json() for p in self.points],
            "diagnostics": list(self.diagnostics),
        }


def _as_vector(expected):
    if isinstance(expected, RationalFunction):
        return WittVector2(expected, RationalFunction.zero(expected.field))
    return expected


def check_good_reduction(c, expected) -> GoodReductionVerdict:
    """Compare the branch count with the conductor of ``expected`` and the reductions."""
    expected = _as_vector(expected)
    diagnostics = []
    points = branch_locus(c)
    count = branch_count(points)
    outside = [p for p in points if not p.specializes_to_zero()]
    if outside:
        diagnostics.append(f"{branch_count(outside)} branch point(s) do not specialize to x = 0")
    reduction = None
    if isinstance(c, Character2):
        conductor = order2_breaks(expected.f1).conductor
        deg = degeneration_order2(c.F, c.hint)
        if isinstance(deg, Zero):
            reduction = deg.reduction
            diagnostics.extend(deg.notes)
        else:
            diagnostics.append(f"positive depth {deg.depth}")
    else:
        conductor = ramification_breaks(expected).conductor
        reduction = _order4_reduction(c, diagnostics)
    if reduction is None:
        matches = False
    elif isinstance(c, Character2):
        matches = order2_equivalent(reduction.f1, expected.f1)
    else:
        matches = asw_equivalent(reduction, expected)
    if reduction is not None and not matches:
        diagnostics.append(f"reduction {reduction.render()} is not ASW-equivalent to {expected.render()}")
    if count != conductor:
        diagnostics.append(f"branch count {count} != conductor {conductor}")
    verdict = count == conductor and matches and not outside
    return GoodReductionVerdict(verdict, count, conductor, reduction, diagnostics, points)


def _order4_reduction(c: Character4, diagnostics):
    """Reduction of an order-4 character via the combination lemma, case (4)."""
    first = degeneration_order2(c.F1, c.hint1 if c.hint1 is not None else DyadicRationalFunction.constant(c.F1.ring, 1))
    if not isinstance(first, Zero):
        diagnostics.append(f"order-2 subcharacter has positive depth {first.depth}")
        return None
    if c.base is None:
        diagnostics.append("no certified minimal extension supplied")
        return None
    if not order2_equivalent(c.base.f1, first.reduction.f1):
        diagnostics.append("minimal extension does not extend the order-2 reduction")
        return None
    if c.secondary is None:
        return reduce_witt(c.base)[0]
    second = degeneration_order2(c.secondary.F, c.secondary.hint)
    if not isinstance(second, Zero):
        diagnostics.append(f"secondary character has positive depth {second.depth}")
        return None
    diagnostics.extend(second.notes)
    zero = RationalFunction.zero(c.base.f1.field)
    lifted = WittVector2(zero, second.reduction.f1)  # Verschiebung of the order-2 class
    return reduce_witt(witt_add(c.base, lifted))[0]
