"""Free graded symmetric algebras over O with a D-action, and their DG structure.

An element is a finite sum of words with coefficients in Q(x).  A word is a
sorted tuple of factors ``(g, b)``: generator index ``g`` in the well-order,
carrying the pure derivative ``d^b``.  x-powers never sit inside a factor,
they slide into the coefficient because the tensor product is over O.

Sorting a list of factors into a word multiplies by the Koszul sign of the
permutation restricted to odd factors; a word with a repeated odd factor is 0.

Base ``"weyl1"`` means operators act; base ``"point"`` is the field Q with no
derivatives (b is always 0 and coefficients are constants).
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .ore import OreOperator, Poly, RationalFunction, _split_sign
from .rings import QX, CoeffRing
from .syntax import Node, ParseError, eval_operator, parse_expr

__all__ = [
    "DGAError",
    "MorphismError",
    "GenSet",
    "AlgElement",
    "DGAPresentation",
    "AlgebraMorphism",
    "FreeDGModule",
    "ModuleMap",
    "TensorElement",
    "multiply",
    "act",
    "differential",
    "extend_morphism",
    "adjunction_transpose",
    "symmetrize",
    "invariant_product",
    "to_tensor",
    "compare_invariants_iso",
    "parse_alg_expr",
    "random_element",
    "random_presentation",
]

BASES = ("weyl1", "point")
_ZERO = RationalFunction.coerce(0)
_ONE = RationalFunction.coerce(1)


class DGAError(ValueError):
    pass


class MorphismError(DGAError):
    def __init__(self, msg: str, generator: str | None = None):
        super().__init__(msg)
        self.generator = generator


class GenSet:
    """Ordered homogeneous basis; the list order is the well-order."""

    __slots__ = ("gens", "_index")

    def __init__(self, gens: Iterable[tuple[str, int]] = ()):
        self.gens = tuple((str(n), int(k)) for n, k in gens)
        self._index = {}
        for i, (n, k) in enumerate(self.gens):
            if n in self._index:
                raise DGAError(f"duplicate generator name {n!r}")
            if k < 0:
                raise DGAError(f"generator {n!r} has negative degree")
            self._index[n] = i

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def __contains__(self, name):
        return name in self._index

    def __eq__(self, other):
        return isinstance(other, GenSet) and self.gens == other.gens

    def __hash__(self):
        return hash(self.gens)

    def __repr__(self):
        return "GenSet(" + ", ".join(f"{n}:{k}" for n, k in self.gens) + ")"

    @property
    def names(self) -> tuple:
        return tuple(n for n, _ in self.gens)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise DGAError(f"unknown generator {name!r}") from None

    def name(self, i: int) -> str:
        return self.gens[i][0]

    def degree(self, g) -> int:
        i = g if isinstance(g, int) else self.index(g)
        return self.gens[i][1]

    def well_order_index(self) -> dict:
        return dict(self._index)

    def concat(self, other: "GenSet") -> "GenSet":
        return GenSet(self.gens + other.gens)


# -- words -------------------------------------------------------------------

def _canonical(gens: GenSet, factors: list) -> tuple[int, tuple | None]:
    """Sort factors, returning (sign, word) or (0, None) when an odd factor repeats."""
    odd = [gens.gens[g][1] % 2 for g, _ in factors]
    sign = 1
    for i in range(len(factors)):
        if not odd[i]:
            continue
        for j in range(i + 1, len(factors)):
            if odd[j] and factors[j] < factors[i]:
                sign = -sign
    word = tuple(sorted(factors))
    for a, b in zip(word, word[1:]):
        if a == b and gens.gens[a[0]][1] % 2:
            return 0, None
    return sign, word


def _word_degree(gens: GenSet, w: tuple) -> int:
    return sum(gens.gens[g][1] for g, _ in w)


class AlgElement:
    __slots__ = ("gens", "terms")

    def __init__(self, gens: GenSet, terms: Mapping[tuple, object] | None = None):
        self.gens = gens
        t = {}
        for w, c in (terms or {}).items():
            c = RationalFunction.coerce(c)
            if not c.is_zero():
                t[tuple(w)] = c
        self.terms = t

    @classmethod
    def _raw(cls, gens, terms):
        e = object.__new__(cls)
        e.gens, e.terms = gens, terms
        return e

    @classmethod
    def one(cls, gens: GenSet) -> "AlgElement":
        return cls._raw(gens, {(): _ONE})

    @classmethod
    def zero(cls, gens: GenSet) -> "AlgElement":
        return cls._raw(gens, {})

    @classmethod
    def scalar(cls, gens: GenSet, c) -> "AlgElement":
        return cls(gens, {(): c})

    @classmethod
    def gen(cls, gens: GenSet, name: str, b: int = 0) -> "AlgElement":
        return cls._raw(gens, {((gens.index(name), b),): _ONE})

    @classmethod
    def from_factors(cls, gens: GenSet, factors: Sequence[tuple], coeff=1) -> "AlgElement":
        sign, w = _canonical(gens, list(factors))
        if not sign:
            return cls.zero(gens)
        return cls(gens, {w: RationalFunction.coerce(coeff) * sign})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AlgElement.scalar(self.gens, other)
        if not isinstance(other, AlgElement):
            return NotImplemented
        return self.gens == other.gens and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms))

    def _check(self, other):
        if not isinstance(other, AlgElement):
            raise TypeError(f"expected AlgElement, got {type(other).__name__}")
        if other.gens != self.gens:
            raise DGAError("elements over different generator sets")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, RationalFunction)):
            other = AlgElement.scalar(self.gens, other)
        self._check(other)
        t = dict(self.terms)
        for w, c in other.terms.items():
            s = t.get(w, _ZERO) + c
            if s.is_zero():
                t.pop(w, None)
            else:
                t[w] = s
        return AlgElement._raw(self.gens, t)

    __radd__ = __add__

    def __neg__(self):
        return AlgElement._raw(self.gens, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "AlgElement":
        c = RationalFunction.coerce(c)
        if c.is_zero():
            return AlgElement.zero(self.gens)
        return AlgElement._raw(self.gens, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RationalFunction)):
            return self.scale(other)
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, RationalFunction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        out = AlgElement.one(self.gens)
        for _ in range(k):
            out = multiply(out, self)
        return out

    def degrees(self) -> set:
        return {_word_degree(self.gens, w) for w in self.terms}

    @property
    def degree(self) -> int | None:
        """Homogeneous degree; None for 0; raises for inhomogeneous elements."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise DGAError(f"inhomogeneous element (degrees {sorted(ds)})")
        return ds.pop()

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def generators_used(self) -> set:
        return {g for w in self.terms for g, _ in w}

    def max_length(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def weight(self) -> int:
        """Total derivative order; -1 for 0."""
        return max((sum(b for _, b in w) for w in self.terms), default=-1)

    def component(self, length: int) -> "AlgElement":
        return AlgElement._raw(self.gens, {w: c for w, c in self.terms.items() if len(w) == length})

    def reindex(self, new: GenSet, mapping: Mapping[int, int] | None = None) -> "AlgElement":
        """Rename into a larger generator set (by name unless ``mapping`` is given)."""
        if mapping is None:
            mapping = {i: new.index(n) for i, (n, _) in enumerate(self.gens.gens)}
        out = AlgElement.zero(new)
        for w, c in self.terms.items():
            out = out + AlgElement.from_factors(new, [(mapping[g], b) for g, b in w], c)
        return out

    def format(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            c = self.terms[w]
            neg, c = _split_sign(c)
            fs = [self.gens.name(g) if b == 0 else f"op({'d' if b == 1 else f'd^{b}'}, {self.gens.name(g)})"
                  for g, b in w]
            if c == 1:
                body = "*".join(fs) if fs else "1"
            else:
                cs = str(c)
                if not (c.is_polynomial() and sum(1 for v in c.num.c if v) == 1):
                    cs = f"({cs})"
                body = "*".join([cs] + fs)
            parts.append(("-" if neg else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    __str__ = format

    def __repr__(self):
        return f"AlgElement({self.format()})"


def multiply(s: AlgElement, t: AlgElement) -> AlgElement:
    s._check(t)
    gens = s.gens
    out: dict = {}
    for w1, c1 in s.terms.items():
        for w2, c2 in t.terms.items():
            sign, w = _canonical(gens, list(w1 + w2))
            if not sign:
                continue
            c = c1 * c2
            if sign < 0:
                c = -c
            v = out.get(w, _ZERO) + c
            if v.is_zero():
                out.pop(w, None)
            else:
                out[w] = v
    return AlgElement._raw(gens, out)


def _dd(t: AlgElement) -> AlgElement:
    """One application of d/dx: coefficients differentiate, factors raise b."""
    gens = t.gens
    out = AlgElement.zero(gens)
    for w, c in t.terms.items():
        dc = c.derivative()
        if not dc.is_zero():
            out = out + AlgElement._raw(gens, {w: dc})
        for k in range(len(w)):
            g, b = w[k]
            f = list(w)
            f[k] = (g, b + 1)
            out = out + AlgElement.from_factors(gens, f, c)
    return out


def act(op: OreOperator, t: AlgElement) -> AlgElement:
    """The D-module action: sum of c_i(x) * d^i applied to t."""
    op = OreOperator.coerce(op)
    out = AlgElement.zero(t.gens)
    if op.is_zero() or t.is_zero():
        return out
    cur = t
    for i in range(op.degree + 1):
        if i:
            cur = _dd(cur)
        c = op.terms.get(i)
        if c is not None:
            out = out + cur.scale(c)
    return out


# -- presentations -------------------------------------------------------------

class DGAPresentation:
    """Semifree algebra S(V) on ``gens`` with d fixed on generators."""

    def __init__(self, gens: GenSet, diff: Mapping[str, AlgElement] | None = None,
                 base: str = "weyl1", validate: bool = True):
        if base not in BASES:
            raise DGAError(f"unknown base {base!r}")
        self.gens, self.base = gens, base
        d = {}
        for n, _ in gens:
            e = (diff or {}).get(n)
            if e is None:
                e = AlgElement.zero(gens)
            if e.gens != gens:
                raise DGAError(f"d({n}) lives over another generator set")
            d[n] = e
        extra = set(diff or {}) - set(gens.names)
        if extra:
            raise DGAError(f"differential given for unknown generator {sorted(extra)[0]!r}")
        self.diff = d
        self._dgen: dict = {}
        self.validated = False
        if validate:
            self.validate()

    def validate(self) -> "DGAPresentation":
        for n, k in self.gens:
            e = self.diff[n]
            if e.is_zero():
                continue
            ds = e.degrees()
            if ds != {k - 1}:
                raise DGAError(f"d({n}) has degree {sorted(ds)}, expected {k - 1}")
            if self.base == "point":
                for w, c in e.terms.items():
                    if any(b for _, b in w) or not c.is_constant():
                        raise DGAError(f"d({n}) uses x or d over the point base")
        self.validated = True
        for n, _ in self.gens:
            dd = self.d(self.diff[n])
            if not dd.is_zero():
                self.validated = False
                raise DGAError(f"d^2({n}) = {dd.format()} is not zero")
        return self

    def gen(self, name: str, b: int = 0) -> AlgElement:
        return AlgElement.gen(self.gens, name, b)

    def one(self) -> AlgElement:
        return AlgElement.one(self.gens)

    def element(self, text: str) -> AlgElement:
        return parse_alg_expr(text, self.gens, self.base)

    def _dfactor(self, g: int, b: int) -> AlgElement:
        key = (g, b)
        v = self._dgen.get(key)
        if v is None:
            base = self.diff[self.gens.name(g)]
            v = base
            for _ in range(b):
                v = _dd(v)
            self._dgen[key] = v
        return v

    def d(self, t: AlgElement) -> AlgElement:
        if not self.validated:
            raise DGAError("differential of an unvalidated presentation")
        return differential(self, t)

    def __eq__(self, other):
        return (isinstance(other, DGAPresentation) and self.gens == other.gens
                and self.base == other.base and self.diff == other.diff)

    def __hash__(self):
        return hash((self.gens, self.base))

    def __repr__(self):
        return f"DGAPresentation({self.base}, {self.gens!r})"


def differential(pres: DGAPresentation, t: AlgElement) -> AlgElement:
    """Graded Leibniz rule; on a factor (g, b) it is d^b applied to d(g)."""
    if not pres.validated:
        raise DGAError("differential of an unvalidated presentation")
    gens = pres.gens
    if t.gens != gens:
        raise DGAError("element over another generator set")
    out = AlgElement.zero(gens)
    for w, c in t.terms.items():
        sdeg = 0
        for k, (g, b) in enumerate(w):
            dg = pres._dfactor(g, b)
            if not dg.is_zero():
                left = AlgElement._raw(gens, {w[:k]: _ONE})
                right = AlgElement._raw(gens, {w[k + 1:]: _ONE})
                term = multiply(multiply(left, dg), right)
                out = out + term.scale(-c if sdeg % 2 else c)
            sdeg += gens.gens[g][1]
    return out


class AlgebraMorphism:
    """Unital, D-linear algebra map fixed by generator images."""

    def __init__(self, source: DGAPresentation, target: DGAPresentation,
                 images: Mapping[str, AlgElement], check: bool = True):
        self.source, self.target = source, target
        img = {}
        for n, k in source.gens:
            e = images.get(n)
            if e is None:
                raise MorphismError(f"no image for generator {n!r}", n)
            if e.gens != target.gens:
                raise MorphismError(f"image of {n!r} lives over another generator set", n)
            if not e.is_zero() and e.degrees() != {k}:
                raise MorphismError(f"image of {n!r} has degree {sorted(e.degrees())}, expected {k}", n)
            img[n] = e
        extra = set(images) - set(source.gens.names)
        if extra:
            raise MorphismError(f"image given for unknown generator {sorted(extra)[0]!r}")
        self.images = img
        self._fac: dict = {}
        if check:
            for n, _ in source.gens:
                lhs = target.d(img[n])
                rhs = self(source.diff[n])
                if lhs != rhs:
                    raise MorphismError(
                        f"chain condition fails on {n!r}: d(f({n})) = {lhs.format()}, "
                        f"f(d({n})) = {rhs.format()}", n)

    def _factor(self, g: int, b: int) -> AlgElement:
        v = self._fac.get((g, b))
        if v is None:
            v = self.images[self.source.gens.name(g)]
            for _ in range(b):
                v = _dd(v)
            self._fac[(g, b)] = v
        return v

    def __call__(self, t: AlgElement) -> AlgElement:
        if t.gens != self.source.gens:
            raise DGAError("element is not over the source generators")
        T = self.target.gens
        out = AlgElement.zero(T)
        for w, c in t.terms.items():
            acc = AlgElement._raw(T, {(): c})
            for g, b in w:
                acc = multiply(acc, self._factor(g, b))
                if acc.is_zero():
                    break
            out = out + acc
        return out

    def then(self, other: "AlgebraMorphism") -> "AlgebraMorphism":
        """other o self."""
        if self.target != other.source:
            raise MorphismError("morphisms are not composable")
        return AlgebraMorphism(self.source, other.target,
                               {n: other(e) for n, e in self.images.items()}, check=False)

    def __eq__(self, other):
        return (isinstance(other, AlgebraMorphism) and self.source == other.source
                and self.target == other.target and self.images == other.images)

    def __hash__(self):
        return hash((self.source, self.target))

    @classmethod
    def identity(cls, A: DGAPresentation) -> "AlgebraMorphism":
        return cls(A, A, {n: A.gen(n) for n in A.gens.names}, check=False)


def extend_morphism(assignment: Mapping[str, AlgElement], source: DGAPresentation,
                    target: DGAPresentation) -> AlgebraMorphism:
    """The unique algebra morphism with the given generator values; checked."""
    if not source.validated or not target.validated:
        raise DGAError("both presentations must be validated")
    return AlgebraMorphism(source, target, assignment)


# -- expressions ---------------------------------------------------------------

def _eval_alg(node: Node, gens: GenSet, base: str, line: int) -> AlgElement:
    k = node.kind
    if k == "int":
        return AlgElement.scalar(gens, node.args[0])
    if k == "x":
        if base == "point":
            raise ParseError("x is not available over the point base", line, node.col)
        return AlgElement.scalar(gens, Poly((0, 1)))
    if k == "d":
        raise ParseError("d may only appear inside op(...)", line, node.col)
    if k == "name":
        name = node.args[0]
        if name not in gens:
            raise ParseError(f"unknown generator {name!r}", line, node.col)
        return AlgElement.gen(gens, name)
    if k == "op":
        if base == "point":
            raise ParseError("op(...) is not available over the point base", line, node.col)
        op = eval_operator(node.args[0], line)
        name = node.args[1]
        if name not in gens:
            raise ParseError(f"unknown generator {name!r}", line, node.col)
        return act(op, AlgElement.gen(gens, name))
    if k in ("add", "sub", "mul"):
        a = _eval_alg(node.args[0], gens, base, line)
        b = _eval_alg(node.args[1], gens, base, line)
        return a + b if k == "add" else a - b if k == "sub" else multiply(a, b)
    if k == "neg":
        return -_eval_alg(node.args[0], gens, base, line)
    if k == "div":
        a = _eval_alg(node.args[0], gens, base, line)
        b = _eval_alg(node.args[1], gens, base, line)
        if set(b.terms) != {()}:
            raise ParseError("can only divide by a nonzero function of x", line, node.col)
        return a.scale(b.terms[()].inverse())
    if k == "pow":
        return _eval_alg(node.args[0], gens, base, line) ** node.args[1]
    raise ParseError(f"unexpected {k}", line, node.col)


def parse_alg_expr(text: str, gens: GenSet, base: str = "weyl1", line: int = 0, col0: int = 0) -> AlgElement:
    """Parse ``2*x*v*w - op(d^2, v)`` style expressions."""
    return _eval_alg(parse_expr(text, line, col0, allow_names=True), gens, base, line)


# -- modules and the adjunction -----------------------------------------------

class FreeDGModule:
    """Free graded D-module on ``gens`` with a linear differential."""

    def __init__(self, gens: GenSet, diff: Mapping[str, AlgElement] | None = None, base: str = "weyl1"):
        self.gens, self.base = gens, base
        diff = dict(diff or {})
        for n, e in diff.items():
            if any(len(w) != 1 for w in e.terms):
                raise DGAError(f"d({n}) is not a module element")
        self._alg = DGAPresentation(gens, diff, base)
        self.diff = self._alg.diff

    def symmetric_algebra(self) -> DGAPresentation:
        return self._alg

    def d(self, m: AlgElement) -> AlgElement:
        return self._alg.d(m)

    def __eq__(self, other):
        return isinstance(other, FreeDGModule) and self._alg == other._alg

    def __hash__(self):
        return hash(self._alg)


class ModuleMap:
    """D-linear chain map M -> For(A), stored by generator images."""

    def __init__(self, source: FreeDGModule, target: DGAPresentation, images: Mapping[str, AlgElement]):
        self.source, self.target = source, target
        self.images = {}
        for n, k in source.gens:
            e = images.get(n, AlgElement.zero(target.gens))
            if not e.is_zero() and e.degrees() != {k}:
                raise MorphismError(f"image of {n!r} has the wrong degree", n)
            self.images[n] = e
        for n, _ in source.gens:
            if target.d(self.images[n]) != self(source.diff[n]):
                raise MorphismError(f"module map does not commute with d on {n!r}", n)

    def __call__(self, m: AlgElement) -> AlgElement:
        out = AlgElement.zero(self.target.gens)
        for w, c in m.terms.items():
            if len(w) != 1:
                raise DGAError("not a module element")
            (g, b), = w
            out = out + act(OreOperator({b: c}), self.images[self.source.gens.name(g)])
        return out

    def __eq__(self, other):
        return (isinstance(other, ModuleMap) and self.source == other.source
                and self.target == other.target and self.images == other.images)

    def __hash__(self):
        return hash((self.source, self.target))


def adjunction_transpose(direction: str, morphism):
    """``"extend"``: ModuleMap M -> For A  to  AlgebraMorphism S M -> A.
    ``"restrict"``: the inverse, restriction along the words of length one.
    """
    if direction == "extend":
        if not isinstance(morphism, ModuleMap):
            raise TypeError("extend expects a ModuleMap")
        return extend_morphism(morphism.images, morphism.source.symmetric_algebra(), morphism.target)
    if direction == "restrict":
        if not isinstance(morphism, AlgebraMorphism):
            raise TypeError("restrict expects an AlgebraMorphism")
        S = morphism.source
        if any(w and len(w) != 1 for e in S.diff.values() for w in e.terms):
            raise DGAError("source is not the symmetric algebra of a DG module")
        M = FreeDGModule(S.gens, S.diff, S.base)
        return ModuleMap(M, morphism.target, morphism.images)
    raise ValueError(f"unknown direction {direction!r}")


# -- tensors and symmetrization ------------------------------------------------

class TensorElement:
    """Linear combination of ordered factor lists; no symmetry imposed."""

    __slots__ = ("gens", "ring", "terms")

    def __init__(self, gens: GenSet, terms: Mapping[tuple, object] | None = None, ring: CoeffRing = QX):
        self.gens, self.ring = gens, ring
        t = {}
        for w, c in (terms or {}).items():
            c = ring.coerce(c)
            if not ring.is_zero(c):
                key = tuple(w)
                prev = t.get(key)
                c = c if prev is None else ring.add(prev, c)
                if ring.is_zero(c):
                    t.pop(key, None)
                else:
                    t[key] = c
        self.terms = t

    @classmethod
    def word(cls, gens, factors, coeff=1, ring: CoeffRing = QX):
        return cls(gens, {tuple(factors): coeff}, ring)

    def __eq__(self, other):
        return (isinstance(other, TensorElement) and self.gens == other.gens
                and self.ring == other.ring and self.terms == other.terms)

    def __hash__(self):
        return hash(frozenset(self.terms))

    def _check(self, other):
        if not isinstance(other, TensorElement) or other.gens != self.gens or other.ring != self.ring:
            raise DGAError("tensors over different generators or rings")

    def __add__(self, other):
        self._check(other)
        R = self.ring
        t = dict(self.terms)
        for w, c in other.terms.items():
            v = R.add(t.get(w, R.zero()), c)
            if R.is_zero(v):
                t.pop(w, None)
            else:
                t[w] = v
        out = object.__new__(TensorElement)
        out.gens, out.ring, out.terms = self.gens, R, t
        return out

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TensorElement":
        R = self.ring
        c = R.coerce(c)
        return TensorElement(self.gens, {w: R.mul(c, v) for w, v in self.terms.items()}, R)

    def tensor(self, other: "TensorElement") -> "TensorElement":
        self._check(other)
        R = self.ring
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = R.add(out.get(w, R.zero()), R.mul(c1, c2))
        return TensorElement(self.gens, out, R)

    def lengths(self) -> set:
        return {len(w) for w in self.terms}

    def permute(self, sigma: Sequence[int]) -> "TensorElement":
        """sigma . T: the factor in slot i moves to slot sigma[i], with the Koszul sign."""
        R = self.ring
        n = len(sigma)
        out: dict = {}
        for w, c in self.terms.items():
            if len(w) != n:
                raise DGAError("permutation length differs from word length")
            new = [None] * n
            for i, f in enumerate(w):
                new[sigma[i]] = f
            sign = _koszul(self.gens, w, sigma)
            key = tuple(new)
            out[key] = R.add(out.get(key, R.zero()), c if sign > 0 else R.neg(c))
        return TensorElement(self.gens, out, R)


def _koszul(gens: GenSet, w: Sequence, sigma: Sequence[int]) -> int:
    sign = 1
    for i in range(len(w)):
        if gens.gens[w[i][0]][1] % 2 == 0:
            continue
        for j in range(i + 1, len(w)):
            if gens.gens[w[j][0]][1] % 2 and sigma[i] > sigma[j]:
                sign = -sign
    return sign


def symmetrize(T: TensorElement) -> TensorElement:
    """Signed group average (1/n!) sum over sigma of sigma . T, per word length."""
    R = T.ring
    out = TensorElement(T.gens, {}, R)
    for n in sorted(T.lengths()):
        if R.characteristic and R.characteristic <= n:
            raise DGAError(f"symmetrization of length {n} needs characteristic 0 or > {n}")
        part = TensorElement(T.gens, {w: c for w, c in T.terms.items() if len(w) == n}, R)
        acc = TensorElement(T.gens, {}, R)
        for sigma in itertools.permutations(range(n)):
            acc = acc + part.permute(sigma)
        out = out + acc.scale(R.inv(R.coerce(math.factorial(n))))
    return out


def _is_invariant(T: TensorElement) -> bool:
    return symmetrize(T) == T


def invariant_product(S: TensorElement, T: TensorElement) -> TensorElement:
    """S v T = Sym(S (x) T) on invariant tensors."""
    if not _is_invariant(S) or not _is_invariant(T):
        raise DGAError("invariant_product needs symmetric inputs")
    return symmetrize(S.tensor(T))


def to_tensor(a: AlgElement) -> TensorElement:
    """The identification of the symmetric algebra with invariant tensors."""
    out = TensorElement(a.gens, {}, QX)
    for w, c in a.terms.items():
        out = out + symmetrize(TensorElement(a.gens, {w: c}, QX))
    return out


@dataclass(frozen=True)
class InvariantReport:
    samples: int
    failures: tuple

    @property
    def passed(self) -> bool:
        return not self.failures


def compare_invariants_iso(gens: GenSet, samples: int, rng: random.Random,
                           max_len: int = 2, base: str = "weyl1") -> InvariantReport:
    """Check to_tensor(s * t) == to_tensor(s) v to_tensor(t) on random pairs."""
    fails = []
    for k in range(samples):
        s = random_element(gens, rng, max_len=max_len, terms=2, base=base)
        t = random_element(gens, rng, max_len=max_len, terms=2, base=base)
        if to_tensor(multiply(s, t)) != invariant_product(to_tensor(s), to_tensor(t)):
            fails.append((k, s.format(), t.format()))
    return InvariantReport(samples, tuple(fails))


# -- random data ---------------------------------------------------------------

def _random_coeff(rng: random.Random, base: str):
    a = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2]))
    if base == "point":
        return a
    return Poly([a] + [Fraction(rng.randint(-2, 2)) for _ in range(rng.randint(0, 1))])


def random_element(gens: GenSet, rng: random.Random, max_len: int = 3, terms: int = 3,
                   base: str = "weyl1", degree: int | None = None, max_b: int = 1) -> AlgElement:
    """Sum of random words; restricted to one degree when ``degree`` is given."""
    out = AlgElement.zero(gens)
    if not len(gens):
        return AlgElement.scalar(gens, _random_coeff(rng, base)) if degree in (None, 0) else out
    for _ in range(terms):
        if degree is None:
            length = rng.randint(0, max_len)
            fs = [(rng.randrange(len(gens)), rng.randint(0, max_b) if base == "weyl1" else 0)
                  for _ in range(length)]
        else:
            fs = _random_word_of_degree(gens, rng, degree, max_len, max_b if base == "weyl1" else 0)
            if fs is None:
                continue
        out = out + AlgElement.from_factors(gens, fs, _random_coeff(rng, base))
    return out


def _random_word_of_degree(gens, rng, degree, max_len, max_b):
    for _ in range(30):
        fs, deg = [], 0
        while deg < degree and len(fs) < max_len:
            choices = [i for i, (_, k) in enumerate(gens.gens) if 0 < k <= degree - deg]
            if not choices:
                break
            g = rng.choice(choices)
            fs.append((g, rng.randint(0, max_b)))
            deg += gens.gens[g][1]
        if deg == degree:
            return fs
    return None


def random_presentation(rng: random.Random, base: str = "weyl1", max_deg: int = 4,
                        per_degree: int = 2, names: str = "v", min_deg: int = 1,
                        max_b: int = 1) -> DGAPresentation:
    """Semifree presentation whose differentials are built from known cycles.

    Generators are added degree by degree; d(g) is a combination of boundaries
    d(s) and products of earlier cycles, so d^2 = 0 holds by construction.
    """
    gl: list = []
    k = 0
    for deg in range(min_deg, max_deg + 1):
        for _ in range(rng.randint(1, per_degree)):
            gl.append((f"{names}{k}", deg))
            k += 1
    gens = GenSet(gl)
    cycles: list = []
    diff: dict = {}
    for name, deg in gl:
        d = AlgElement.zero(gens)
        if deg >= 1 and rng.random() < 0.75:
            earlier = GenSet([g for g in gl if g[0] != name and gens.index(g[0]) < gens.index(name)])
            if len(earlier):
                s = random_element(gens, rng, max_len=2, terms=2, base=base, degree=deg, max_b=max_b)
                s = AlgElement(gens, {w: c for w, c in s.terms.items()
                                      if all(gens.index(n) < gens.index(name) for n in
                                             (gens.name(g) for g, _ in w))})
                partial = DGAPresentation(gens, diff, base)
                d = d + partial.d(s)
                for a in cycles:
                    for b in cycles:
                        if (a.degree or 0) + (b.degree or 0) == deg - 1 and rng.random() < 0.5:
                            d = d + multiply(a, b).scale(_random_coeff(rng, base))
                    if a.degree == deg - 1 and rng.random() < 0.5:
                        op = OreOperator({rng.randint(0, max_b): 1}) if base == "weyl1" else OreOperator({0: 1})
                        d = d + act(op, a)
        diff[name] = d
        if d.is_zero():
            cycles.append(AlgElement.gen(gens, name))
    return DGAPresentation(gens, diff, base)
