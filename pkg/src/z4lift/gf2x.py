"""Exact arithmetic over F_{2^d}: field elements, polynomials, rational functions.

Field elements are plain ints read as bit vectors of coefficients of the
generator ``t`` modulo a fixed irreducible polynomial.  Polynomials in ``x``
are sparse exponent -> element maps; rational functions are kept in lowest
terms with a monic denominator so that ``==`` is representation equality.
"""

from __future__ import annotations

import functools

from . import exprparse
from .errors import NotASquare

MAX_DEGREE = 16


def _clmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _clmod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def _is_irreducible(m: int) -> bool:
    d = m.bit_length() - 1
    for q in range(2, 1 << (d // 2 + 1)):
        if _clmod(m, q) == 0:
            return False
    return True


@functools.lru_cache(maxsize=None)
def irreducible_modulus(d: int) -> int:
    """Least irreducible binary polynomial of degree ``d`` with nonzero constant term."""
    if d < 1:
        raise ValueError("extension degree must be positive")
    for m in range((1 << d) | 1, 1 << (d + 1), 2):
        if _is_irreducible(m):
            return m
    raise AssertionError("unreachable")


class GroundField:
    """The finite field F_{2^d} = F_2[t]/(modulus)."""

    def __init__(self, d: int):
        if not 1 <= d <= MAX_DEGREE:
            raise ValueError(f"extension degree {d} outside 1..{MAX_DEGREE}")
        self.d = d
        self.order = 1 << d
        self.modulus = irreducible_modulus(d)
        self.gen = _clmod(0b10, self.modulus)

    def __repr__(self):
        return f"GF(2^{self.d})"

    def __reduce__(self):
        return (GF, (self.d,))

    def elements(self):
        return range(self.order)

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        return _clmod(_clmul(a, b), self.modulus)

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        r = 1
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in " + repr(self))
        return self.pow(a, self.order - 2)

    def sqrt(self, a: int) -> int:
        # Frobenius has order d, so its inverse is a -> a^(2^(d-1)).
        return self.pow(a, self.order >> 1)

    def render(self, a: int) -> str:
        if a in (0, 1):
            return str(a)
        terms = []
        for k in range(a.bit_length() - 1, -1, -1):
            if a >> k & 1:
                terms.append("1" if k == 0 else "t" if k == 1 else f"t^{k}")
        return " + ".join(terms)

    def parse(self, text: str) -> int:
        value = parse_rational(text, self)
        if value.den != Polynomial.one(self) or value.num.degree > 0:
            raise exprparse.ExpressionError(f"{text!r} is not a field element")
        return value.num.coeff(0)


@functools.lru_cache(maxsize=None)
def GF(d: int = 1) -> GroundField:
    return GroundField(d)


class Polynomial:
    """Sparse polynomial in ``x`` over a :class:`GroundField`; immutable."""

    __slots__ = ("field", "_c", "_hash")

    def __init__(self, field: GroundField, coeffs=None):
        self.field = field
        c = {}
        if coeffs:
            items = coeffs.items() if isinstance(coeffs, dict) else enumerate(coeffs)
            for e, a in items:
                if e < 0:
                    raise ValueError("negative exponent in polynomial")
                a = _clmod(a, field.modulus)
                if a:
                    c[e] = c.get(e, 0) ^ a
                    if not c[e]:
                        del c[e]
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, field, c):
        p = cls.__new__(cls)
        p.field = field
        p._c = c
        p._hash = None
        return p

    @classmethod
    def zero(cls, field):
        return cls._raw(field, {})

    @classmethod
    def one(cls, field):
        return cls._raw(field, {0: 1})

    @classmethod
    def constant(cls, field, a):
        return cls(field, {0: a})

    @classmethod
    def x(cls, field):
        return cls._raw(field, {1: 1})

    @classmethod
    def monomial(cls, field, e, a=1):
        return cls(field, {e: a})

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    @property
    def degree(self) -> int:
        return max(self._c) if self._c else -1

    def exponents(self):
        return sorted(self._c)

    def coeff(self, e: int) -> int:
        return self._c.get(e, 0)

    def lc(self) -> int:
        return self._c[self.degree] if self._c else 0

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(self.field, other)
        return isinstance(other, Polynomial) and self.field is other.field and self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.d, frozenset(self._c.items())))
        return self._hash

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for e, a in other._c.items():
            s = c.get(e, 0) ^ a
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        return Polynomial._raw(self.field, c)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        mul = self.field.mul
        c = {}
        for e1, a1 in self._c.items():
            for e2, a2 in other._c.items():
                e = e1 + e2
                s = c.get(e, 0) ^ mul(a1, a2)
                if s:
                    c[e] = s
                else:
                    c.pop(e, None)
        return Polynomial._raw(self.field, c)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        r, a = Polynomial.one(self.field), self
        while n:
            if n & 1:
                r = r * a
            a = a * a
            n >>= 1
        return r

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, int):
            return Polynomial.constant(self.field, other)
        return NotImplemented

    def scale(self, a: int):
        if a == 0:
            return Polynomial.zero(self.field)
        mul = self.field.mul
        return Polynomial._raw(self.field, {e: mul(c, a) for e, c in self._c.items()})

    def shift(self, k: int):
        return Polynomial._raw(self.field, {e + k: c for e, c in self._c.items()})

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        inv_lc = F.inv(other.lc())
        dq = other.degree
        r = dict(self._c)
        q = {}
        while r:
            dr = max(r)
            if dr < dq:
                break
            a = F.mul(r[dr], inv_lc)
            q[dr - dq] = a
            for e, b in other._c.items():
                k = e + dr - dq
                s = r.get(k, 0) ^ F.mul(a, b)
                if s:
                    r[k] = s
                else:
                    r.pop(k, None)
        return Polynomial._raw(F, q), Polynomial._raw(F, r)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.lc()))

    def gcd(self, other):
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic()

    def derivative(self):
        # Only odd exponents survive in characteristic 2.
        return Polynomial._raw(self.field, {e - 1: a for e, a in self._c.items() if e & 1})

    def frobenius(self):
        mul = self.field.mul
        return Polynomial._raw(self.field, {2 * e: mul(a, a) for e, a in self._c.items()})

    def valuation_at_zero(self) -> int:
        """Order of vanishing at x = 0 (the lowest exponent)."""
        if not self._c:
            raise ValueError("zero polynomial has no valuation")
        return min(self._c)

    def evaluate(self, a: int) -> int:
        F = self.field
        return functools.reduce(lambda acc, item: acc ^ F.mul(item[1], F.pow(a, item[0])), self._c.items(), 0)

    def render(self) -> str:
        if not self._c:
            return "0"
        terms = []
        for e in sorted(self._c):
            a = self._c[e]
            coef = self.field.render(a)
            if " " in coef:
                coef = f"({coef})"
            if e == 0:
                terms.append(coef)
            else:
                mono = "x" if e == 1 else f"x^{e}"
                terms.append(mono if a == 1 else f"{coef}*{mono}")
        return " + ".join(terms)

    def __repr__(self):
        return f"Polynomial({self.render()})"


def poly_sqrt(P: Polynomial) -> Polynomial:
    """Square root of a polynomial whose exponents are all even."""
    odd = [e for e in P.exponents() if e & 1]
    if odd:
        raise NotASquare(f"{P.render()} has a nonzero coefficient at odd exponent {odd[0]}")
    sqrt = P.field.sqrt
    return Polynomial._raw(P.field, {e // 2: sqrt(a) for e, a in P._c.items()})


class RationalFunction:
    """Element of F_{2^d}(x) in lowest terms with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None, *, _canonical=False):
        F = num.field
        if den is None:
            den = Polynomial.one(F)
        if not _canonical:
            if den.is_zero():
                raise ZeroDivisionError("rational function with zero denominator")
            if num.is_zero():
                den = Polynomial.one(F)
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num, den = num // g, den // g
                inv = F.inv(den.lc())
                if inv != 1:
                    num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @property
    def field(self):
        return self.num.field

    @classmethod
    def zero(cls, field):
        return cls(Polynomial.zero(field), Polynomial.one(field), _canonical=True)

    @classmethod
    def one(cls, field):
        return cls(Polynomial.one(field), Polynomial.one(field), _canonical=True)

    @classmethod
    def constant(cls, field, a):
        return cls(Polynomial.constant(field, a))

    @classmethod
    def x(cls, field):
        return cls(Polynomial.x(field), _canonical=True)

    @classmethod
    def from_laurent(cls, field, terms: dict):
        """Build sum of ``a * x^e`` for ``e -> a`` in ``terms`` (negative ``e`` allowed)."""
        terms = {e: a for e, a in terms.items() if a}
        if not terms:
            return cls.zero(field)
        low = min(0, min(terms))
        num = Polynomial(field, {e - low: a for e, a in terms.items()})
        return cls(num, Polynomial.monomial(field, -low))

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Polynomial)):
            other = self._coerce(other)
        return isinstance(other, RationalFunction) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other, _canonical=True)
        if isinstance(other, int):
            return RationalFunction.constant(self.field, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunction.one(self.field) / (self ** -n)
        return RationalFunction(self.num ** n, self.den ** n, _canonical=True)

    def scale(self, a: int):
        return RationalFunction(self.num.scale(a), self.den)

    def derivative(self):
        # (N/D)' = (N'D + ND')/D^2 in characteristic 2
        n, d = self.num, self.den
        return RationalFunction(n.derivative() * d + n * d.derivative(), d * d)

    def frobenius(self):
        return RationalFunction(self.num.frobenius(), self.den.frobenius(), _canonical=True)

    def is_square(self) -> bool:
        return all(e % 2 == 0 for e in self.num.exponents()) and all(e % 2 == 0 for e in self.den.exponents())

    def sqrt(self):
        return RationalFunction(poly_sqrt(self.num), poly_sqrt(self.den), _canonical=True)

    def is_laurent(self) -> bool:
        """True when the only possible finite pole is x = 0."""
        return len(self.den.exponents()) == 1

    def laurent_terms(self) -> dict:
        """Exponent -> coefficient map; requires :meth:`is_laurent`."""
        if not self.is_laurent():
            raise ValueError(f"{self.render()} has poles away from x = 0")
        k = self.den.degree
        return {e - k: a for e, a in self.num.coeffs.items()}

    def pole_order_at_zero(self) -> int:
        """Pole order at x = 0 (0 when regular there)."""
        if self.is_zero():
            return 0
        return max(0, self.den.valuation_at_zero() - self.num.valuation_at_zero())

    def render(self) -> str:
        num = self.num.render()
        if self.den == Polynomial.one(self.field):
            return num
        den = self.den.render()
        if len(self.num.exponents()) > 1 or (self.num.lc() not in (0, 1) and " " in self.field.render(self.num.lc())):
            num = f"({num})"
        if len(self.den.exponents()) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    __str__ = render

    def __repr__(self):
        return f"RationalFunction({self.render()})"


def is_square(f: RationalFunction) -> bool:
    return f.is_square()


def parse_rational(text: str, field: GroundField | None = None) -> RationalFunction:
    """Parse e.g. ``"(1 + x^2)/x^3"`` or ``"t*x + 1"`` into a rational function."""
    field = field or GF(1)
    names = {
        "x": RationalFunction.x(field),
        "t": RationalFunction.constant(field, field.gen),
    }
    value = exprparse.evaluate(text, names, lambda n: RationalFunction.constant(field, n & 1))
    if not isinstance(value, RationalFunction):
        raise exprparse.ExpressionError(f"{text!r} did not evaluate to a rational function")
    return value


class DifferentialForm:
    """The form ``u dx`` on F_{2^d}(x)."""

    __slots__ = ("coefficient",)

    def __init__(self, coefficient: RationalFunction):
        self.coefficient = coefficient

    @classmethod
    def d(cls, g: RationalFunction):
        return cls(g.derivative())

    @classmethod
    def dlog(cls, g: RationalFunction):
        return cls(g.derivative() / g)

    def is_zero(self):
        return self.coefficient.is_zero()

    def __add__(self, other):
        return DifferentialForm(self.coefficient + other.coefficient)

    def scale(self, a: int):
        return DifferentialForm(self.coefficient.scale(a))

    def __eq__(self, other):
        return isinstance(other, DifferentialForm) and self.coefficient == other.coefficient

    def __hash__(self):
        return hash(("dx", self.coefficient))

    def render(self) -> str:
        u = self.coefficient
        if u.is_zero():
            return "0"
        if u.num == Polynomial.one(u.field):
            den = u.den.render()
            if len(u.den.exponents()) > 1:
                den = f"({den})"
            return "dx" if u.den == Polynomial.one(u.field) else f"dx/{den}"
        return f"({u.render()})*dx"

    __str__ = render

    def __repr__(self):
        return f"DifferentialForm({self.render()})"
