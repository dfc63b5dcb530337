"""The coefficient ring O = W(F_{2^d})[zeta8] and its elements.

Elements are integer coordinate vectors in the basis ``zeta8^j * T^k``
(0 <= j < 4, 0 <= k < d) where ``T`` is a root of the integer lift of the
residue field modulus.  The uniformizer is ``pi = zeta8 - 1`` (e = 4) and
valuations are normalized by ``nu(2) = 1``; internally they are counted in
units of ``nu(pi) = 1/4``.

Precision model: a number is either *exact* (``prec is None``) or known
modulo ``pi^prec``.  Exact values stay exact under ring operations and under
exact division by powers of ``pi``, so everything built from 2, i, zeta8,
sqrt2 and Teichmueller lifts for d <= 2 is computed without truncation.
Teichmueller lifts for d >= 3 come from a Hensel iteration and carry
``prec = N``; anything derived from them tracks its own precision and a
zero/nonzero decision on a value that is zero to precision raises
:class:`InsufficientPrecision`.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from math import comb

from .errors import InsufficientPrecision, UnsupportedDegree, ValueNotUnit
from .gf2x import GF

MAX_DEGREE = 12
E = 4  # ramification index of zeta8 over Q_2


def _v2(n: int) -> int:
    return (n & -n).bit_length() - 1 if n else math.inf


def _ceil_div(a, b):
    return -((-a) // b)


class RingConfig:
    """Fixed-precision model of W(F_{2^d})[zeta8]."""

    def __init__(self, d: int, N: int):
        if d < 1:
            raise ValueError("residue degree must be positive")
        if d > MAX_DEGREE:
            raise UnsupportedDegree(f"residue degree {d} exceeds the supported {MAX_DEGREE}")
        if N < 8:
            raise ValueError("precision N must be at least 8")
        self.d = d
        self.N = N
        self.e = E
        self.field = GF(d)
        mod = self.field.modulus
        # monic integer lift of the residue modulus, low coefficients only
        self._tail = tuple((mod >> k) & 1 for k in range(d))
        self.size = 4 * d
        self.zero = DyadicNumber(self, (0,) * self.size)
        self.one = self.const(1)
        self.two = self.const(2)
        self.zeta8 = self.zeta_power(1)
        self.i_unit = self.zeta_power(2)
        self.sqrt2 = self.zeta8 - self.zeta_power(3)  # zeta8 + zeta8^-1
        self.lam = self.const(-2)  # zeta_2 - 1
        self.pi = self.zeta8 - self.one
        # 2/pi = -(pi^3 + 4 pi^2 + 6 pi + 4), from (1 + pi)^4 + 1 = 0
        p2 = self.pi * self.pi
        self._two_over_pi = -(p2 * self.pi + 4 * p2 + 6 * self.pi + self.const(4))
        self.T = DyadicNumber(self, self._w_basis(1)) if d > 1 else self.one

    def __repr__(self):
        return f"RingConfig(d={self.d}, N={self.N})"

    def __reduce__(self):
        return (make_ring, (self.d, self.N))

    # construction helpers -------------------------------------------------

    def _w_basis(self, k):
        c = [0] * self.size
        c[k] = 1
        return tuple(c)

    def const(self, n: int) -> DyadicNumber:
        c = [0] * self.size
        c[0] = int(n)
        return DyadicNumber(self, tuple(c))

    def zeta_power(self, j: int) -> DyadicNumber:
        j %= 8
        sign = -1 if j >= 4 else 1
        c = [0] * self.size
        c[(j % 4) * self.d] = sign
        return DyadicNumber(self, tuple(c))

    def pi_power(self, k: int) -> DyadicNumber:
        return self.pi ** k

    def lift_residue(self, a: int) -> DyadicNumber:
        """Integer lift of a residue field element in the T-basis (not multiplicative)."""
        c = [0] * self.size
        for k in range(self.d):
            c[k] = (a >> k) & 1
        return DyadicNumber(self, tuple(c))

    def coerce(self, x) -> DyadicNumber:
        if isinstance(x, DyadicNumber):
            return x
        if isinstance(x, int):
            return self.const(x)
        raise TypeError(f"cannot coerce {x!r} into {self!r}")

    # coordinate kernels ---------------------------------------------------

    def _w_reduce(self, row):
        d = self.d
        tail = self._tail
        for p in range(len(row) - 1, d - 1, -1):
            c = row[p]
            if c:
                row[p] = 0
                for k in range(d):
                    if tail[k]:
                        row[p - d + k] -= c
        return row[:d]

    def _mul(self, a, b):
        if self.d == 1:
            a0, a1, a2, a3 = a
            b0, b1, b2, b3 = b
            return (
                a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1,
                a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2,
                a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3,
                a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
            )
        d = self.d
        rows = [[0] * (2 * d - 1) for _ in range(4)]
        for j in range(4):
            aj = a[j * d:(j + 1) * d]
            if not any(aj):
                continue
            for k in range(4):
                bk = b[k * d:(k + 1) * d]
                if not any(bk):
                    continue
                s, sign = j + k, 1
                if s >= 4:
                    s, sign = s - 4, -1
                row = rows[s]
                for p, x in enumerate(aj):
                    if x:
                        for q, y in enumerate(bk):
                            if y:
                                row[p + q] += sign * x * y
        out = []
        for row in rows:
            out.extend(self._w_reduce(row))
        return tuple(out)

    def _to_pi_basis(self, a):
        d = self.d
        b = []
        for j in range(4):
            for t in range(d):
                b.append(sum(comb(k, j) * a[k * d + t] for k in range(j, 4)))
        return b

    def _from_pi_basis(self, b):
        d = self.d
        a = []
        for k in range(4):
            for t in range(d):
                a.append(sum(comb(j, k) * (-1 if (j - k) & 1 else 1) * b[j * d + t] for j in range(k, 4)))
        return tuple(a)

    def _vpi(self, a):
        """Valuation in pi-units of a coordinate vector (inf for zero)."""
        b = self._to_pi_basis(a)
        d = self.d
        best = math.inf
        for j in range(4):
            for t in range(d):
                c = b[j * d + t]
                if c:
                    v = 4 * _v2(c) + j
                    if v < best:
                        best = v
        return best

    def _truncate(self, a, prec):
        """Canonical representative of ``a`` modulo pi^prec."""
        b = self._to_pi_basis(a)
        d = self.d
        for j in range(4):
            m = _ceil_div(prec - j, 4)
            mod = 1 << m if m > 0 else 1
            for t in range(d):
                b[j * d + t] %= mod
        return self._from_pi_basis(b)

    @functools.lru_cache(maxsize=4096)
    def _inverse_matrix(self, a):
        """Rational inverse of the multiplication-by-``a`` matrix (columns = images of the basis)."""
        n = self.size
        cols = []
        for i in range(n):
            cols.append(self._mul(a, self._w_basis(i)))
        m = [[Fraction(cols[j][i]) for j in range(n)] + [Fraction(int(i == r)) for r in range(n)] for i in range(n)]
        for c in range(n):
            piv = next((r for r in range(c, n) if m[r][c] != 0), None)
            if piv is None:
                raise ZeroDivisionError("element is not invertible")
            m[c], m[piv] = m[piv], m[c]
            inv = 1 / m[c][c]
            m[c] = [x * inv for x in m[c]]
            for r in range(n):
                if r != c and m[r][c] != 0:
                    f = m[r][c]
                    m[r] = [x - f * y for x, y in zip(m[r], m[c])]
        return tuple(tuple(row[n:]) for row in m)

    def _solve(self, a, x):
        inv = self._inverse_matrix(a)
        return [sum(r * xi for r, xi in zip(row, x)) for row in inv]


@functools.lru_cache(maxsize=None)
def make_ring(d: int = 1, N: int = 32) -> RingConfig:
    return RingConfig(d, N)


class DyadicNumber:
    __slots__ = ("ring", "coords", "prec")

    def __init__(self, ring: RingConfig, coords, prec=None):
        self.ring = ring
        if prec is not None:
            coords = ring._truncate(coords, prec)
        self.coords = tuple(coords)
        self.prec = prec

    # predicates and valuations ------------------------------------------

    def is_exact(self):
        return self.prec is None

    def is_exact_zero(self):
        return self.prec is None and not any(self.coords)

    def is_zero_to_precision(self):
        """True when the value is zero modulo pi^prec (exact zero included)."""
        return not any(self.coords)

    def vpi(self) -> int:
        """Valuation in pi-units; raises for values indistinguishable from zero."""
        if not any(self.coords):
            if self.prec is None:
                return math.inf
            raise InsufficientPrecision(f"value is zero modulo pi^{self.prec}")
        return self.ring._vpi(self.coords)

    def vpi_bound(self) -> int:
        """Valuation, or the precision when the value is zero to precision."""
        if not any(self.coords):
            return math.inf if self.prec is None else self.prec
        return self.ring._vpi(self.coords)

    def valuation(self) -> Fraction:
        v = self.vpi()
        return v if v == math.inf else Fraction(v, E)

    def residue(self) -> int:
        """Image in the residue field F_{2^d}."""
        if self.prec is not None and self.prec < 1:
            raise InsufficientPrecision("no residue digit is known")
        b = self.ring._to_pi_basis(self.coords)
        r = 0
        for t in range(self.ring.d):
            r |= (b[t] & 1) << t
        return r

    # arithmetic -----------------------------------------------------------

    def _other(self, other):
        if isinstance(other, DyadicNumber):
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return None

    @staticmethod
    def _min_prec(p, q):
        if p is None:
            return q
        if q is None:
            return p
        return min(p, q)

    def __add__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return DyadicNumber(self.ring, tuple(x + y for x, y in zip(self.coords, other.coords)),
                            self._min_prec(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self):
        return DyadicNumber(self.ring, tuple(-x for x in self.coords), self.prec)

    def __sub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return DyadicNumber(self.ring, tuple(x - y for x, y in zip(self.coords, other.coords)),
                            self._min_prec(self.prec, other.prec))

    def __rsub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        coords = self.ring._mul(self.coords, other.coords)
        if self.prec is None and other.prec is None:
            return DyadicNumber(self.ring, coords)
        prec = math.inf
        if self.prec is not None:
            prec = min(prec, self.prec + other.vpi_bound())
        if other.prec is not None:
            prec = min(prec, other.prec + self.vpi_bound())
        if prec == math.inf:
            return DyadicNumber(self.ring, coords)
        return DyadicNumber(self.ring, coords, int(prec))

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Quotient in the ring; exact when the exact quotient is integral, else mod pi^N."""
        other = self._other(other)
        if other is None:
            return NotImplemented
        if other.is_exact_zero():
            raise ZeroDivisionError("division by exact zero")
        num = self
        if self.is_exact() and other.is_exact():
            try:
                return self.exact_div(other)
            except ArithmeticError:
                num = DyadicNumber(self.ring, self.coords, self.ring.N)
        try:
            return num.exact_div(other)
        except ArithmeticError as exc:
            if isinstance(exc, InsufficientPrecision):
                raise
            raise ValueNotUnit(f"{self.render()} / {other.render()} is not integral") from None

    def __rtruediv__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return self.ring.one / self ** -n
        r, a = self.ring.one, self
        while n:
            if n & 1:
                r = r * a
            a = a * a
            n >>= 1
        return r

    def divide_by_pi(self, k: int = 1) -> DyadicNumber:
        """Exact division by pi^k; the value must have valuation >= k/4."""
        x = self
        c = self.ring._two_over_pi
        for _ in range(k):
            y = self.ring._mul(x.coords, c.coords)
            if any(v & 1 for v in y):
                raise ArithmeticError("value is not divisible by pi")
            prec = None if x.prec is None else x.prec - 1
            x = DyadicNumber(self.ring, tuple(v >> 1 for v in y), prec)
        return x

    def unit_part(self):
        """(k, u) with self = pi^k * u and u a unit."""
        k = self.vpi()
        return k, self.divide_by_pi(k)

    def inverse_unit(self, prec: int) -> DyadicNumber:
        """Inverse of a unit, correct modulo pi^prec."""
        if self.vpi() != 0:
            raise ValueNotUnit("inverse_unit needs a unit")
        sol = self.ring._solve(self.coords, self.ring.one.coords)
        m = _ceil_div(prec, 4) + 1
        mod = 1 << m
        coords = tuple((f.numerator * pow(f.denominator, -1, mod)) % mod for f in sol)
        own = prec if self.prec is None else min(prec, self.prec)
        return DyadicNumber(self.ring, coords, own)

    def exact_div(self, other: DyadicNumber) -> DyadicNumber:
        """Quotient known to lie in the ring (e.g. Bareiss elimination steps)."""
        if self.prec is None and other.prec is None:
            if not any(other.coords):
                raise ZeroDivisionError("division by exact zero")
            if not any(self.coords):
                return self
            sol = self.ring._solve(other.coords, self.coords)
            if any(f.denominator != 1 for f in sol):
                raise ArithmeticError("quotient is not integral")
            return DyadicNumber(self.ring, tuple(int(f) for f in sol))
        k = other.vpi()
        vx = self.vpi_bound()
        if vx < k:
            raise ArithmeticError("quotient is not integral")
        u = other.divide_by_pi(k)
        target = self._min_prec(None if self.prec is None else self.prec - k,
                                None if other.prec is None else vx - k + other.prec - k)
        if not any(self.coords):
            return DyadicNumber(self.ring, self.coords, target)
        num = self.divide_by_pi(k)
        q = num * u.inverse_unit(target + 4)
        return DyadicNumber(self.ring, q.coords, target)

    # comparison and rendering --------------------------------------------

    def __eq__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        if self.prec is None and other.prec is None:
            return self.coords == other.coords
        return (self - other).is_zero_to_precision()

    def __hash__(self):
        return hash((self.coords, self.prec))

    def key(self):
        return (self.coords, self.prec)

    def serialize(self) -> dict:
        return {"coords": list(self.coords), "prec": "exact" if self.prec is None else self.prec}

    def _basis_render(self, coords):
        d = self.ring.d
        terms = []
        for j in range(4):
            for t in range(d):
                c = coords[j * d + t]
                if not c:
                    continue
                mono = "*".join(filter(None, [
                    "" if j == 0 else "zeta8" if j == 1 else f"zeta8^{j}",
                    "" if t == 0 else "T" if t == 1 else f"T^{t}",
                ]))
                if not mono:
                    terms.append(str(c))
                elif c == 1:
                    terms.append(mono)
                elif c == -1:
                    terms.append("-" + mono)
                else:
                    terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") or "0"

    def render(self) -> str:
        tail = "" if self.prec is None else f" mod pi^{self.prec}"
        if not any(self.coords):
            return "0" + tail
        k, u = self.unit_part()
        unit = self._basis_render(u.coords)
        if " " in unit:
            unit = f"({unit})"
        return (unit if k == 0 else f"{unit} * pi^{k}") + tail

    def __repr__(self):
        return f"DyadicNumber({self.render()})"


def teichmuller(ring: RingConfig, a: int) -> DyadicNumber:
    """Multiplicative lift of a residue field element."""
    if a == 0:
        return ring.zero
    q = ring.field.order
    y = ring.lift_residue(a)
    # For d <= 2 the lift of the generator is already a root of unity, so the
    # iteration y -> y^q becomes stationary after at most one step.
    for _ in range(2):
        z = y ** q
        if z == y:
            return y
        y = z
    digits = _ceil_div(ring.N, 4) + 1
    mod = 1 << digits
    coords = tuple(c % mod for c in y.coords)
    for _ in range(digits + 1):
        y = DyadicNumber(ring, coords)
        coords = tuple(c % mod for c in (y ** q).coords)
    return DyadicNumber(ring, coords, ring.N)


def parse_number(ring: RingConfig, text: str) -> DyadicNumber:
    """Parse a ring element written with 2, i, zeta8, sqrt2, pi, lam and t.

    ``t`` denotes the Teichmueller lift of the residue field generator.
    """
    from . import exprparse

    names = {
        "i": ring.i_unit,
        "zeta8": ring.zeta8,
        "sqrt2": ring.sqrt2,
        "pi": ring.pi,
        "lam": ring.lam,
        "t": teichmuller(ring, ring.field.gen),
    }
    value = exprparse.evaluate(text, names, ring.const)
    if isinstance(value, int):
        value = ring.const(value)
    if not isinstance(value, DyadicNumber):
        raise exprparse.ExpressionError(f"{text!r} is not a ring element")
    return value


# --------------------------------------------------------------------------
# valued polynomials and rational functions


def _coerce_coeffs(ring, coeffs):
    out = [ring.coerce(c) for c in coeffs]
    while out and out[-1].is_exact_zero():
        out.pop()
    return tuple(out)


class DyadicPolynomial:
    """Polynomial in X with DyadicNumber coefficients (ascending order)."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: RingConfig, coeffs=()):
        self.ring = ring
        self.coeffs = _coerce_coeffs(ring, coeffs)

    @classmethod
    def constant(cls, ring, c):
        return cls(ring, (c,))

    @classmethod
    def x(cls, ring):
        return cls(ring, (0, 1))

    @classmethod
    def monomial(cls, ring, n, c=1):
        return cls(ring, (0,) * n + (c,))

    @classmethod
    def from_roots(cls, ring, roots):
        """prod (X - r) over the given roots."""
        p = cls.constant(ring, 1)
        for r in roots:
            p = p * cls(ring, (-ring.coerce(r), 1))
        return p

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def coeff(self, n):
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else self.ring.zero

    def is_exact_zero(self):
        return not self.coeffs

    def is_exact(self):
        return all(c.is_exact() for c in self.coeffs)

    def _other(self, other):
        if isinstance(other, DyadicPolynomial):
            return other
        if isinstance(other, (int, DyadicNumber)):
            return DyadicPolynomial(self.ring, (other,))
        return None

    def __add__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return DyadicPolynomial(self.ring, [self.coeff(k) + other.coeff(k) for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return DyadicPolynomial(self.ring, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return DyadicPolynomial(self.ring)
        out = [self.ring.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_exact_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_exact_zero():
                    out[i + j] = out[i + j] + a * b
        return DyadicPolynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        r = DyadicPolynomial.constant(self.ring, 1)
        for _ in range(n):
            r = r * self
        return r

    def shift(self, n: int):
        """Multiply by X^n (n >= 0)."""
        if not self.coeffs:
            return self
        return DyadicPolynomial(self.ring, (self.ring.zero,) * n + self.coeffs)

    def x_adic_split(self):
        """(k, Q) with self = X^k * Q and Q(0) not an exact zero."""
        k = 0
        while k < len(self.coeffs) and self.coeffs[k].is_exact_zero():
            k += 1
        return k, DyadicPolynomial(self.ring, self.coeffs[k:])

    def derivative(self):
        return DyadicPolynomial(self.ring, [k * c for k, c in enumerate(self.coeffs)][1:])

    def evaluate(self, x):
        r = self.ring.zero
        for c in reversed(self.coeffs):
            r = r * x + c
        return r

    def divide_by_pi(self, k: int):
        return DyadicPolynomial(self.ring, [c.divide_by_pi(k) for c in self.coeffs])

    def gauss_vpi(self) -> int:
        """Gauss valuation in pi-units."""
        if not self.coeffs:
            return math.inf
        known = [c.vpi() for c in self.coeffs if not c.is_zero_to_precision()]
        vague = [c.prec for c in self.coeffs if c.is_zero_to_precision() and not c.is_exact()]
        best = min(known, default=math.inf)
        if vague and min(vague) <= best:
            raise InsufficientPrecision("Gauss valuation is attained only by coefficients that are zero to precision")
        return best

    def gauss_val(self) -> Fraction:
        v = self.gauss_vpi()
        return v if v == math.inf else Fraction(v, E)

    def residue(self):
        """Reduction modulo pi of a polynomial with Gauss valuation >= 0."""
        from .gf2x import Polynomial

        field = self.ring.field
        terms = {}
        for k, c in enumerate(self.coeffs):
            if c.prec is not None and c.prec < 1:
                raise InsufficientPrecision("coefficient has no known residue digit")
            if c.vpi_bound() < 0:
                raise ValueNotUnit("polynomial is not integral")
            r = c.residue()
            if r:
                terms[k] = r
        return Polynomial(field, terms)

    def leading_residue(self):
        """Residue of self / pi^gauss_vpi."""
        return self.divide_by_pi(self.gauss_vpi()).residue()

    def key(self):
        return tuple(c.key() for c in self.coeffs)

    def __eq__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        if self.is_exact() and other.is_exact():
            return self.coeffs == other.coeffs
        return all(c.is_zero_to_precision() for c in (self - other).coeffs)

    def __hash__(self):
        return hash(self.key())

    def serialize(self):
        return [c.serialize() for c in self.coeffs]

    def render(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_exact_zero():
                continue
            s = c._basis_render(c.coords)
            tail = "" if c.prec is None else f" mod pi^{c.prec}"
            if " " in s or tail:
                s = f"({s}{tail})"
            mono = "" if k == 0 else "X" if k == 1 else f"X^{k}"
            if not mono:
                parts.append(s)
            elif s == "1":
                parts.append(mono)
            elif s == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{s}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"DyadicPolynomial({self.render()})"


class DyadicRationalFunction:
    """num/den over the ring; kept unreduced, with the Gauss valuation."""

    __slots__ = ("ring", "num", "den")

    def __init__(self, num: DyadicPolynomial, den: DyadicPolynomial | None = None):
        self.ring = num.ring
        if den is None:
            den = DyadicPolynomial.constant(num.ring, 1)
        if den.is_exact_zero():
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den

    @classmethod
    def constant(cls, ring, c):
        return cls(DyadicPolynomial.constant(ring, c))

    @classmethod
    def x(cls, ring):
        return cls(DyadicPolynomial.x(ring))

    def _other(self, other):
        if isinstance(other, DyadicRationalFunction):
            return other
        if isinstance(other, DyadicPolynomial):
            return DyadicRationalFunction(other)
        if isinstance(other, (int, DyadicNumber)):
            return DyadicRationalFunction.constant(self.ring, other)
        return None

    def __add__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        if other.den == self.den and self.den.is_exact() and other.den.is_exact():
            return DyadicRationalFunction(self.num + other.num, self.den)
        return DyadicRationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return DyadicRationalFunction(-self.num, self.den)

    def __sub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return DyadicRationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        if other.num.is_exact_zero():
            raise ZeroDivisionError("division by exact zero")
        return DyadicRationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._other(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return DyadicRationalFunction(self.den, self.num) ** (-n)
        return DyadicRationalFunction(self.num ** n, self.den ** n)

    def is_exact_zero(self):
        return self.num.is_exact_zero()

    def gauss_vpi(self):
        vn = self.num.gauss_vpi()
        return vn if vn == math.inf else vn - self.den.gauss_vpi()

    def gauss_val(self) -> Fraction:
        v = self.gauss_vpi()
        return v if v == math.inf else Fraction(v, E)

    def leading_residue(self):
        """Residue of self / pi^gauss_vpi as an element of F_{2^d}(x)."""
        from .gf2x import RationalFunction

        return RationalFunction(self.num.leading_residue(), self.den.leading_residue())

    def residue(self):
        if self.gauss_vpi() != 0:
            raise ValueNotUnit(f"Gauss valuation {self.gauss_val()} is not 0")
        return self.leading_residue()

    def scale_by_pi(self, k: int):
        """self * pi^k for k >= 0, or self / pi^-k when the numerator allows it."""
        if k >= 0:
            return DyadicRationalFunction(self.num * self.ring.pi ** k, self.den)
        return DyadicRationalFunction(self.num.divide_by_pi(-k), self.den)

    def __eq__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num.key(), self.den.key()))

    def serialize(self):
        return {"num": self.num.serialize(), "den": self.den.serialize()}

    def render(self):
        n = self.num.render()
        if self.den == 1:
            return n
        d = self.den.render()
        return f"({n})/({d})"

    def __repr__(self):
        return f"DyadicRationalFunction({self.render()})"


def gauss_val(F) -> Fraction:
    return F.gauss_val()


def residue(F):
    return F.residue()


def parse_function(ring: RingConfig, text: str) -> DyadicRationalFunction:
    """Parse a rational function in X with ring-element constants."""
    from . import exprparse

    const = lambda c: DyadicRationalFunction.constant(ring, c)  # noqa: E731
    names = {
        "X": DyadicRationalFunction.x(ring),
        "i": const(ring.i_unit),
        "zeta8": const(ring.zeta8),
        "sqrt2": const(ring.sqrt2),
        "pi": const(ring.pi),
        "lam": const(ring.lam),
        "t": const(teichmuller(ring, ring.field.gen)),
    }
    value = exprparse.evaluate(text, names, const)
    if not isinstance(value, DyadicRationalFunction):
        raise exprparse.ExpressionError(f"{text!r} is not a rational function")
    return value


# --------------------------------------------------------------------------
# Newton polygons, resultants, separability


def newton_polygon(P: DyadicPolynomial) -> list[tuple[Fraction, int]]:
    """Lower convex hull of (k, nu(a_k)) as (slope, length) segments, slopes increasing."""
    if P.degree < 1:
        return []
    ends = (P.coeffs[0], P.coeffs[-1])
    if ends[0].is_exact_zero():
        raise ValueError("polynomial vanishes at X = 0; split off the X-power first")
    for c in ends:
        if c.is_zero_to_precision():
            raise InsufficientPrecision("end coefficient of the Newton polygon is zero to precision")
    points, vague = [], []
    for k, c in enumerate(P.coeffs):
        if c.is_exact_zero():
            continue
        if c.is_zero_to_precision():
            vague.append((k, c.prec))
        else:
            points.append((k, c.vpi()))
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    # a coefficient known only up to a bound must lie strictly above the hull
    for k, bound in vague:
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            if x1 <= k <= x2 and (bound - y1) * (x2 - x1) <= (y2 - y1) * (k - x1):
                raise InsufficientPrecision(f"coefficient of X^{k} could move the Newton polygon")
    return [(Fraction(y2 - y1, E * (x2 - x1)), x2 - x1) for (x1, y1), (x2, y2) in zip(hull, hull[1:])]


def root_valuations(P: DyadicPolynomial) -> list[tuple[Fraction, int]]:
    """Valuations of the roots of P (with multiplicity), from the Newton polygon."""
    return [(-s, m) for s, m in newton_polygon(P)]


def _determinant(matrix):
    """Fraction-free (Bareiss) determinant over the ring."""
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return None
    ring = m[0][0].ring
    sign = 1
    prev = None
    for k in range(n - 1):
        # choose the pivot of least valuation, preferring exact entries
        best, best_v = None, math.inf
        for r in range(k, n):
            c = m[r][k]
            if c.is_zero_to_precision():
                continue
            v = c.vpi()
            if v < best_v:
                best, best_v = r, v
        if best is None:
            if all(m[r][k].is_exact_zero() for r in range(k, n)):
                return ring.zero
            raise InsufficientPrecision("pivot column is zero to precision")
        if best != k:
            m[k], m[best] = m[best], m[k]
            sign = -sign
        piv = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                val = piv * row_i[j] - mik * row_k[j]
                row_i[j] = val if k == 0 else val.exact_div(prev)
            row_i[k] = ring.zero
        prev = piv
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def resultant(P: DyadicPolynomial, Q: DyadicPolynomial) -> DyadicNumber:
    m, n = P.degree, Q.degree
    if m < 0 or n < 0:
        raise ValueError("resultant of the zero polynomial")
    ring = P.ring
    if m == 0 and n == 0:
        return ring.one
    size = m + n
    rows = []
    for r in range(n):
        row = [ring.zero] * size
        for k, c in enumerate(reversed(P.coeffs)):
            row[r + k] = c
        rows.append(row)
    for r in range(m):
        row = [ring.zero] * size
        for k, c in enumerate(reversed(Q.coeffs)):
            row[r + k] = c
        rows.append(row)
    return _determinant(rows)


def separability_check(P: DyadicPolynomial) -> bool:
    """True iff P has no repeated root, decided by resultant(P, P')."""
    if P.degree < 1:
        raise ValueError("separability of a constant")
    if P.coeffs[-1].is_zero_to_precision():
        raise InsufficientPrecision("leading coefficient is zero to precision")
    if P.degree == 1:
        return True
    res = resultant(P, P.derivative())
    if res.is_exact_zero():
        return False
    if res.is_zero_to_precision():
        raise InsufficientPrecision(f"resultant is zero modulo pi^{res.prec}")
    return True


# --------------------------------------------------------------------------
# squares


def _artin_schreier_solvable(field, c) -> bool:
    return any(field.mul(a, a) ^ a == c for a in field.elements())


def is_square_constant(c: DyadicNumber) -> bool:
    """Whether c is a square in the fraction field of the completed ring."""
    ring = c.ring
    field = ring.field
    if c.is_exact_zero():
        return True
    k, u = c.unit_part()
    if k % 2:
        return False
    s = teichmuller(ring, field.sqrt(u.residue()))
    while True:
        e = u - s * s
        if e.is_zero_to_precision():
            if e.is_exact() or e.prec >= 9:
                return True
            raise InsufficientPrecision("square test needs precision beyond pi^9")
        j = e.vpi()
        if j >= 9:
            return True  # Hensel: nu(s^2 - u) > nu(4)
        if j == 8:
            eps = e.divide_by_pi(8).residue()
            sbar = s.residue()
            return _artin_schreier_solvable(field, field.mul(eps, field.inv(field.mul(sbar, sbar))))
        if j % 2:
            return False
        root = teichmuller(ring, field.sqrt(e.divide_by_pi(j).residue()))
        s = s + ring.pi ** (j // 2) * root


def _monic_sqrt(ring, coeffs):
    """Monic Q with Q^2 = X^n + ..., over rational coordinates, or None."""
    n = len(coeffs) - 1
    if n % 2:
        return None
    m = n // 2
    zero = (Fraction(0),) * ring.size
    one = tuple(Fraction(int(k == 0)) for k in range(ring.size))

    def add(a, b):
        return tuple(x + y for x, y in zip(a, b))

    q = {m: one}
    for k in range(1, m + 1):
        acc = coeffs[n - k]
        for i in range(m - k + 1, m + 1):
            j = n - k - i
            if m - k < j <= m:
                acc = add(acc, tuple(-x for x in ring._mul(q[i], q[j])))
        q[m - k] = tuple(x / 2 for x in acc)
    square = [zero] * (n + 1)
    for i, a in q.items():
        for j, b in q.items():
            square[i + j] = add(square[i + j], ring._mul(a, b))
    return q if square == list(coeffs) else None


def is_square_function(F: DyadicRationalFunction) -> bool:
    """Exact test whether F is a square in the rational function field over the ring."""
    if not (F.num.is_exact() and F.den.is_exact()):
        raise InsufficientPrecision("square test needs exact coefficients")
    if F.is_exact_zero():
        return True
    k, P = (F.num * F.den).x_adic_split()
    if k % 2 or P.degree % 2:
        return False
    ring = F.ring
    lc = P.coeffs[-1]
    monic = [tuple(ring._solve(lc.coords, c.coords)) for c in P.coeffs]
    if _monic_sqrt(ring, monic) is None:
        return False
    return is_square_constant(lc)
