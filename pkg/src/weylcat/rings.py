"""Coefficient rings behind every matrix, complex and probe.

A ring object carries the arithmetic; elements are plain values
(``Fraction`` for Q, ``int`` in ``range(p)`` for F_p, ``OreOperator`` for
Weyl1, ``RationalFunction`` for the internal field Q(x)).  Linear algebra
only ever talks to elements through these methods, which keeps one
elimination routine correct for fields and for the Euclidean operator ring.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .ore import (
    OreOperator,
    Poly,
    RationalFunction,
    RingMismatchError,
    format_operator,
    left_divide as _ore_left_divide,
    right_divide as _ore_right_divide,
)

__all__ = [
    "CoeffRing",
    "RationalField",
    "PrimeField",
    "Weyl1",
    "RationalFunctionField",
    "QQ",
    "WEYL1",
    "QX",
    "GF",
    "ring_from_spec",
    "is_prime",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class CoeffRing:
    """Common interface.  Subclasses override what differs."""

    spec: str = "?"
    is_field: bool = True
    characteristic: int = 0

    def __eq__(self, other):
        return isinstance(other, CoeffRing) and self.spec == other.spec

    def __hash__(self):
        return hash(("CoeffRing", self.spec))

    def __repr__(self):
        return self.spec

    # arithmetic -----------------------------------------------------------
    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a) -> bool:
        return a == 0

    def is_one(self, a) -> bool:
        return a == 1

    def is_unit(self, a) -> bool:
        return not self.is_zero(a)

    def inv(self, a):
        return 1 / a

    def size(self, a) -> tuple[int, int]:
        """Euclidean size used for pivot choice: (d-degree, coefficient degree)."""
        return (0, 0)

    def left_divide(self, a, b):
        """(q, r) with a = q*b + r."""
        return self.mul(a, self.inv(b)), self.zero()

    def right_divide(self, a, b):
        """(q, r) with a = b*q + r."""
        return self.mul(self.inv(b), a), self.zero()

    # conversion -----------------------------------------------------------
    def coerce(self, a):
        raise NotImplementedError

    def from_operator(self, op: OreOperator):
        """Convert a parsed constant expression into a ring element."""
        if op.is_zero():
            return self.zero()
        if op.degree != 0 or not op.terms[0].is_constant():
            raise RingMismatchError(f"{format_operator(op)} is not a constant of {self.spec}")
        return self.coerce(op.terms[0].constant)

    def fmt(self, a) -> str:
        return str(a)

    def random_element(self, rng: random.Random, size: int = 2):
        return self.coerce(rng.randint(-size, size))


class RationalField(CoeffRing):
    spec = "Q"

    def coerce(self, a):
        if isinstance(a, Fraction):
            return a
        if isinstance(a, int):
            return Fraction(a)
        raise RingMismatchError(f"cannot coerce {a!r} into Q")

    def fmt(self, a) -> str:
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


class PrimeField(CoeffRing):
    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.spec = f"Fp:{p}"

    def coerce(self, a):
        if isinstance(a, Fraction):
            if a.denominator % self.p == 0:
                raise ZeroDivisionError(f"{a} has no image in F_{self.p}")
            return a.numerator * pow(a.denominator, -1, self.p) % self.p
        if isinstance(a, int):
            return a % self.p
        raise RingMismatchError(f"cannot coerce {a!r} into F_{self.p}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 in a prime field")
        return pow(a, -1, self.p)

    def random_element(self, rng, size=2):
        return rng.randrange(self.p)


class RationalFunctionField(CoeffRing):
    """Q(x) as a field; used for O-linear algebra on weight-truncated pieces."""

    spec = "Q(x)"

    def coerce(self, a):
        return RationalFunction.coerce(a)

    def is_zero(self, a):
        return a.is_zero()

    def is_one(self, a):
        return a == 1

    def inv(self, a):
        return a.inverse()

    def size(self, a):
        return (0, a.degree)

    def from_operator(self, op):
        if op.is_zero():
            return self.zero()
        if op.degree != 0:
            raise RingMismatchError(f"{format_operator(op)} is not a function of x")
        return op.terms[0]


class Weyl1(CoeffRing):
    """First Weyl algebra localized at Q(x): operators with rational coefficients."""

    spec = "weyl1"
    is_field = False

    def coerce(self, a):
        try:
            return OreOperator.coerce(a)
        except RingMismatchError:
            raise RingMismatchError(f"cannot coerce {a!r} into weyl1") from None

    def is_zero(self, a):
        return a.is_zero()

    def is_one(self, a):
        return a.degree == 0 and a.terms[0] == 1

    def is_unit(self, a):
        return a.is_unit()

    def inv(self, a):
        return a.inverse()

    def size(self, a):
        return (a.degree, a.lead.degree)

    def left_divide(self, a, b):
        return _ore_left_divide(a, b)

    def right_divide(self, a, b):
        return _ore_right_divide(a, b)

    def from_operator(self, op):
        return op

    def fmt(self, a):
        return format_operator(a)

    def random_element(self, rng, size=2, coeff_degree=1):
        terms = {}
        for i in range(rng.randint(0, size)):
            if rng.random() < 0.7:
                terms[i] = Poly(rng.randint(-2, 2) for _ in range(coeff_degree + 1))
        return OreOperator(terms)


QQ = RationalField()
WEYL1 = Weyl1()
QX = RationalFunctionField()
_PRIME_FIELDS: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _PRIME_FIELDS:
        _PRIME_FIELDS[p] = PrimeField(p)
    return _PRIME_FIELDS[p]


def ring_from_spec(spec: str) -> CoeffRing:
    s = spec.strip()
    if s == "Q":
        return QQ
    if s == "weyl1":
        return WEYL1
    if s == "Q(x)":
        return QX
    if s.startswith("Fp:"):
        try:
            p = int(s[3:])
        except ValueError:
            raise ValueError(f"unknown ring token {spec!r}") from None
        return GF(p)
    raise ValueError(f"unknown ring token {spec!r}")
