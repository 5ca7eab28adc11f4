"""Exact coefficient arithmetic: Q[x], Q(x) and normal-ordered operators.

Operators are sums ``c_i(x) d^i`` with every x-power to the left of every
d-power.  The only relation needed to restore that order is ``d x = x d + 1``,
applied in closed form through the Leibniz rule

    d^i c = sum_k binom(i, k) c^(k) d^(i-k).
"""
from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

__all__ = [
    "Poly",
    "RationalFunction",
    "OreOperator",
    "RingMismatchError",
    "X",
    "D",
    "ONE",
    "ore_multiply",
    "apply_to_polynomial",
    "left_divide",
    "right_divide",
]


class RingMismatchError(TypeError):
    """Operands live in different coefficient rings."""


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise RingMismatchError(f"cannot coerce {c!r} into Q")


class Poly:
    """Dense univariate polynomial over Q, coefficients stored low to high."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [_frac(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def _raw(cls, c: tuple) -> "Poly":
        p = object.__new__(cls)
        p.c = c
        return p

    @classmethod
    def const(cls, a) -> "Poly":
        return cls((a,))

    @classmethod
    def monomial(cls, k: int, a=1) -> "Poly":
        return cls([0] * k + [a])

    @property
    def degree(self) -> int:
        return len(self.c) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return len(self.c) == 1 and self.c[0] == 1

    @property
    def lead(self) -> Fraction:
        return self.c[-1] if self.c else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c == Poly.const(other).c
        return NotImplemented

    def __hash__(self):
        return hash(("Poly", self.c))

    def __add__(self, other):
        other = _as_poly(other)
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] += v
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(tuple(-v for v in self.c))

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if not self.c or not other.c:
            return Poly._raw(())
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, u in enumerate(self.c):
            if u:
                for j, v in enumerate(other.c):
                    out[i + j] += u * v
        return Poly(out)

    __rmul__ = __mul__

    def scale(self, a) -> "Poly":
        a = _frac(a)
        if a == 0:
            return Poly._raw(())
        return Poly._raw(tuple(v * a for v in self.c))

    def __pow__(self, k: int):
        out = Poly._raw((Fraction(1),))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        db, lb = other.degree, other.lead
        q = [Fraction(0)] * max(len(r) - db, 0)
        while len(r) - 1 >= db and r:
            k = len(r) - 1 - db
            t = r[-1] / lb
            q[k] = t
            for j, v in enumerate(other.c):
                r[k + j] -= t * v
            while r and r[-1] == 0:
                r.pop()
        return Poly(q), Poly(r)

    def monic(self) -> "Poly":
        if not self.c or self.c[-1] == 1:
            return self
        return self.scale(1 / self.c[-1])

    def derivative(self) -> "Poly":
        return Poly(i * v for i, v in enumerate(self.c) if i)

    def __call__(self, t):
        acc = Fraction(0)
        for v in reversed(self.c):
            acc = acc * t + v
        return acc

    def __repr__(self):
        return f"Poly({[str(v) for v in self.c]})"

    def __str__(self):
        return _fmt_poly(self)


def _as_poly(a) -> Poly:
    if isinstance(a, Poly):
        return a
    if isinstance(a, (int, Fraction)):
        return Poly.const(a)
    raise RingMismatchError(f"cannot coerce {a!r} into Q[x]")


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


def _fmt_coeff(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _fmt_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        v = p.c[k]
        if v == 0:
            continue
        sign = "-" if v < 0 else "+"
        a = abs(v)
        if k == 0:
            body = _fmt_coeff(a)
        else:
            mono = "x" if k == 1 else f"x^{k}"
            body = mono if a == 1 else f"{_fmt_coeff(a)}*{mono}"
        parts.append((sign, body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


class RationalFunction:
    """Element of Q(x): coprime numerator and monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _normalized=False):
        num = _as_poly(num)
        den = Poly.const(1) if den is None else _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _normalized and not den.is_one():
            if num.is_zero():
                den = Poly.const(1)
            else:
                g = poly_gcd(num, den)
                if not g.is_one():
                    num = num.divmod(g)[0]
                    den = den.divmod(g)[0]
                lc = den.lead
                if lc != 1:
                    num = num.scale(1 / lc)
                    den = den.scale(1 / lc)
        self.num = num
        self.den = den

    @classmethod
    def coerce(cls, a) -> "RationalFunction":
        if isinstance(a, RationalFunction):
            return a
        if isinstance(a, (int, Fraction, Poly)):
            return cls(_as_poly(a), None, True)
        raise RingMismatchError(f"cannot coerce {a!r} into Q(x)")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def is_constant(self) -> bool:
        return self.den.is_one() and self.num.degree <= 0

    @property
    def constant(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.lead

    @property
    def degree(self) -> int:
        """Size measure used for deterministic pivoting: deg num + deg den."""
        return max(self.num.degree, 0) + self.den.degree

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = RationalFunction.coerce(other)
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        return hash(("RF", self.num.c, self.den.c))

    def __add__(self, other):
        other = RationalFunction.coerce(other)
        if self.den.is_one() and other.den.is_one():
            return RationalFunction(self.num + other.num, None, True)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, True)

    def __sub__(self, other):
        return self + (-RationalFunction.coerce(other))

    def __rsub__(self, other):
        return RationalFunction.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, OreOperator):
            return NotImplemented
        other = RationalFunction.coerce(other)
        if self.den.is_one() and other.den.is_one():
            return RationalFunction(self.num * other.num, None, True)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        return self * RationalFunction.coerce(other).inverse()

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.num ** k, self.den ** k, True)

    def derivative(self) -> "RationalFunction":
        if self.den.is_one():
            return RationalFunction(self.num.derivative(), None, True)
        n, d = self.num, self.den
        return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)

    def __call__(self, t):
        return self.num(t) / self.den(t)

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        n = str(self.num)
        if sum(1 for v in self.num.c if v) > 1 or self.num.lead < 0:
            n = f"({n})"
        d = str(self.den)
        if sum(1 for v in self.den.c if v) > 1 or self.den.lead != 1:
            d = f"({d})"
        return f"{n}/{d}"


_RF_ZERO = RationalFunction(Poly(()), None, True)
_RF_ONE = RationalFunction(Poly.const(1), None, True)


def _rf_nth_derivatives(c: RationalFunction, n: int) -> list[RationalFunction]:
    out = [c]
    for _ in range(n):
        out.append(out[-1].derivative())
    return out


class OreOperator:
    """Normal-ordered differential operator with Q(x) coefficients.

    ``terms`` maps each d-exponent to its nonzero coefficient.  Instances are
    immutable; equal operators have identical term maps.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[int, object] | None = None):
        t = {}
        for i, c in (terms or {}).items():
            if i < 0:
                raise ValueError("negative d-exponent")
            c = RationalFunction.coerce(c)
            if not c.is_zero():
                t[int(i)] = c
        self.terms = t
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "OreOperator":
        op = object.__new__(cls)
        op.terms = terms
        op._hash = None
        return op

    @classmethod
    def coerce(cls, a) -> "OreOperator":
        if isinstance(a, OreOperator):
            return a
        c = RationalFunction.coerce(a)
        return cls._raw({0: c} if not c.is_zero() else {})

    @property
    def degree(self) -> int:
        """d-degree; -1 stands in for minus infinity on the zero operator."""
        return max(self.terms) if self.terms else -1

    @property
    def lead(self) -> RationalFunction:
        return self.terms[self.degree] if self.terms else _RF_ZERO

    def coeff(self, i: int) -> RationalFunction:
        return self.terms.get(i, _RF_ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def is_unit(self) -> bool:
        return self.degree == 0

    def inverse(self) -> "OreOperator":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit")
        return OreOperator._raw({0: self.terms[0].inverse()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly, RationalFunction)):
            other = OreOperator.coerce(other)
        if isinstance(other, OreOperator):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset((i, hash(c)) for i, c in self.terms.items()))
        return self._hash

    def __add__(self, other):
        other = OreOperator.coerce(other)
        t = dict(self.terms)
        for i, c in other.terms.items():
            s = t[i] + c if i in t else c
            if s.is_zero():
                t.pop(i, None)
            else:
                t[i] = s
        return OreOperator._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return OreOperator._raw({i: -c for i, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-OreOperator.coerce(other))

    def __rsub__(self, other):
        return OreOperator.coerce(other) - self

    def __mul__(self, other):
        return ore_multiply(self, OreOperator.coerce(other))

    def __rmul__(self, other):
        return ore_multiply(OreOperator.coerce(other), self)

    def __pow__(self, k: int):
        out = OreOperator.coerce(1)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, p):
        return apply_to_polynomial(self, p)

    def __repr__(self):
        return f"OreOperator({self})"

    def __str__(self):
        return format_operator(self)


def _split_sign(c: RationalFunction) -> tuple[bool, RationalFunction]:
    # print a negative leading coefficient as a sign in front
    if c.num.lead < 0 and (not c.is_polynomial() or sum(1 for v in c.num.c if v) == 1):
        return True, -c
    return False, c


def format_operator(a: OreOperator) -> str:
    """Normal-ordered text, terms by descending d-degree."""
    if a.is_zero():
        return "0"
    parts = []
    for i in sorted(a.terms, reverse=True):
        neg, c = _split_sign(a.terms[i])
        cs = str(c)
        if i == 0:
            body = cs
        else:
            mono = "d" if i == 1 else f"d^{i}"
            if c == 1:
                body = mono
            elif c.is_polynomial() and sum(1 for v in c.num.c if v) > 1:
                body = f"({cs})*{mono}"
            else:
                body = f"{cs}*{mono}"
        parts.append(("-" if neg else "+", body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


X = OreOperator._raw({0: RationalFunction(Poly((0, 1)), None, True)})
D = OreOperator._raw({1: _RF_ONE})
ONE = OreOperator._raw({0: _RF_ONE})


def ore_multiply(a: OreOperator, b: OreOperator) -> OreOperator:
    """Normal-ordered product a*b."""
    if not isinstance(a, OreOperator) or not isinstance(b, OreOperator):
        raise RingMismatchError("ore_multiply needs two OreOperator operands")
    if not a.terms or not b.terms:
        return OreOperator._raw({})
    out: dict[int, RationalFunction] = {}
    for j, cb in b.terms.items():
        top = max(a.terms)
        ders = _rf_nth_derivatives(cb, top)
        for i, ca in a.terms.items():
            # ca d^i * cb d^j = ca * sum_k C(i,k) cb^(k) d^(i-k+j)
            for k in range(i + 1):
                dk = ders[k]
                if dk.is_zero():
                    break
                e = i - k + j
                term = ca * dk
                if k:
                    term = term * comb(i, k)
                s = out[e] + term if e in out else term
                out[e] = s
    return OreOperator._raw({e: c for e, c in out.items() if not c.is_zero()})


def apply_to_polynomial(a: OreOperator, p) -> RationalFunction:
    """Let a act on a function of x: d differentiates, x multiplies."""
    f = RationalFunction.coerce(p)
    out = _RF_ZERO
    if not a.terms:
        return out
    ders = _rf_nth_derivatives(f, a.degree)
    for i, c in a.terms.items():
        out = out + c * ders[i]
    return out


def _monomial(c: RationalFunction, i: int) -> OreOperator:
    return OreOperator._raw({i: c})


def left_divide(a: OreOperator, b: OreOperator) -> tuple[OreOperator, OreOperator]:
    """Return (q, r) with a = q*b + r and deg r < deg b."""
    a, b = OreOperator.coerce(a), OreOperator.coerce(b)
    if b.is_zero():
        raise ZeroDivisionError("left_divide by the zero operator")
    q = OreOperator._raw({})
    r = a
    db, lb_inv = b.degree, b.lead.inverse()
    while not r.is_zero() and r.degree >= db:
        t = _monomial(r.lead * lb_inv, r.degree - db)
        q = q + t
        r = r - ore_multiply(t, b)
    return q, r


def right_divide(a: OreOperator, b: OreOperator) -> tuple[OreOperator, OreOperator]:
    """Return (q, r) with a = b*q + r and deg r < deg b."""
    a, b = OreOperator.coerce(a), OreOperator.coerce(b)
    if b.is_zero():
        raise ZeroDivisionError("right_divide by the zero operator")
    q = OreOperator._raw({})
    r = a
    db, lb_inv = b.degree, b.lead.inverse()
    while not r.is_zero() and r.degree >= db:
        # leading coefficient of b * (c d^k) is lead(b) * c
        t = _monomial(r.lead * lb_inv, r.degree - db)
        q = q + t
        r = r - ore_multiply(b, t)
    return q, r
