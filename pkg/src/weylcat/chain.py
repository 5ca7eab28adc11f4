"""Bounded chain complexes of finite free modules and maps between them.

A complex stores ``ranks[n]`` and ``d[n]`` (a ranks[n] x ranks[n-1] matrix,
acting on row vectors).  Chain maps store one matrix per degree and must
satisfy ``d_n * f_{n-1} == f_n * d_n`` in every degree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .linalg import (
    OperatorMatrix,
    block_diag,
    diagonal_form,
    is_injective,
    is_surjective,
    kernel,
    solve,
)
from .ore import RingMismatchError
from .rings import CoeffRing

__all__ = [
    "ComplexError",
    "FreeComplex",
    "ChainMap",
    "HomologyReport",
    "MorphismClassification",
    "Colimit",
    "disc",
    "sphere",
    "zero_complex",
    "generating_sets",
    "homology",
    "cone",
    "classify",
    "colim_sequential",
    "direct_sum",
]


class ComplexError(ValueError):
    """Invalid complex, map or diagram; ``degree`` names the offending spot."""

    def __init__(self, msg: str, degree: int | None = None):
        super().__init__(msg)
        self.degree = degree


class FreeComplex:
    __slots__ = ("ring", "ranks", "d")

    def __init__(self, ring: CoeffRing, ranks: Mapping[int, int],
                 differentials: Mapping[int, OperatorMatrix] | None = None):
        self.ring = ring
        rk = {}
        for n, r in ranks.items():
            if n < 0:
                raise ComplexError(f"negative degree {n}", n)
            if r < 0:
                raise ComplexError(f"negative rank in degree {n}", n)
            if r:
                rk[int(n)] = int(r)
        self.ranks = rk
        d = {}
        for n, M in (differentials or {}).items():
            if n < 1:
                raise ComplexError(f"differential d_{n} leaves the non-negative range", n)
            if M.ring != ring:
                raise RingMismatchError(f"d_{n} over {M.ring}, complex over {ring}")
            if M.shape != (self.rank(n), self.rank(n - 1)):
                raise ComplexError(
                    f"d_{n} has shape {M.shape}, expected {(self.rank(n), self.rank(n - 1))}", n)
            if M.rows and M.cols:
                d[n] = M
        self.d = d
        for n in sorted(d):
            if n - 1 in d and not (d[n] @ d[n - 1]).is_zero():
                raise ComplexError(f"d^2 != 0: d_{n} * d_{n - 1} is nonzero", n)

    def rank(self, n: int) -> int:
        return self.ranks.get(n, 0)

    def diff(self, n: int) -> OperatorMatrix:
        M = self.d.get(n)
        if M is None:
            return OperatorMatrix.zero(self.ring, self.rank(n), self.rank(n - 1))
        return M

    @property
    def top(self) -> int:
        return max(self.ranks) if self.ranks else -1

    def degrees(self) -> range:
        return range(0, self.top + 1)

    def is_zero(self) -> bool:
        return not self.ranks

    def __eq__(self, other):
        if not isinstance(other, FreeComplex):
            return NotImplemented
        if self.ring != other.ring or self.ranks != other.ranks:
            return False
        return all(self.diff(n) == other.diff(n) for n in range(1, self.top + 1))

    def __hash__(self):
        return hash((self.ring, tuple(sorted(self.ranks.items()))))

    def __repr__(self):
        return f"FreeComplex({self.ring}, ranks={dict(sorted(self.ranks.items()))})"


class ChainMap:
    __slots__ = ("source", "target", "f", "label")

    def __init__(self, source: FreeComplex, target: FreeComplex,
                 components: Mapping[int, OperatorMatrix] | None = None, label: str = ""):
        if source.ring != target.ring:
            raise RingMismatchError("source and target over different rings")
        self.source, self.target, self.label = source, target, label
        f = {}
        for n, M in (components or {}).items():
            if M.shape != (source.rank(n), target.rank(n)):
                raise ComplexError(
                    f"component f_{n} has shape {M.shape}, expected "
                    f"{(source.rank(n), target.rank(n))}", n)
            if M.ring != source.ring:
                raise RingMismatchError(f"f_{n} over {M.ring}")
            if M.rows and M.cols:
                f[n] = M
        self.f = f
        top = max(source.top, target.top)
        for n in range(1, top + 1):
            lhs = source.diff(n) @ self.component(n - 1)
            rhs = self.component(n) @ target.diff(n)
            if lhs != rhs:
                raise ComplexError(f"chain map condition fails in degree {n}", n)

    @property
    def ring(self) -> CoeffRing:
        return self.source.ring

    def component(self, n: int) -> OperatorMatrix:
        M = self.f.get(n)
        if M is None:
            return OperatorMatrix.zero(self.ring, self.source.rank(n), self.target.rank(n))
        return M

    @property
    def top(self) -> int:
        return max(self.source.top, self.target.top)

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and all(self.component(n) == other.component(n) for n in range(self.top + 1)))

    def __hash__(self):
        return hash((self.source, self.target))

    def then(self, g: "ChainMap") -> "ChainMap":
        """The composite g o self."""
        if self.target != g.source:
            raise ComplexError("maps are not composable")
        comps = {n: self.component(n) @ g.component(n) for n in range(self.top + 1)}
        return ChainMap(self.source, g.target, comps)

    @classmethod
    def identity(cls, C: FreeComplex) -> "ChainMap":
        return cls(C, C, {n: OperatorMatrix.identity(C.ring, C.rank(n)) for n in C.ranks}, "id")

    @classmethod
    def zero(cls, S: FreeComplex, T: FreeComplex) -> "ChainMap":
        return cls(S, T, {})

    def __repr__(self):
        name = f" {self.label}" if self.label else ""
        return f"ChainMap{name}({self.source!r} -> {self.target!r})"


def zero_complex(ring: CoeffRing) -> FreeComplex:
    return FreeComplex(ring, {})


def sphere(n: int, ring: CoeffRing) -> FreeComplex:
    """S^n: one free generator in degree n.  sphere(-1) is the zero complex."""
    if n < -1:
        raise ComplexError(f"sphere needs n >= -1, got {n}", n)
    if n == -1:
        return zero_complex(ring)
    return FreeComplex(ring, {n: 1})


def disc(n: int, ring: CoeffRing) -> FreeComplex:
    """D^n: rank one in degrees n and n-1 joined by the identity; disc(0) = sphere(0)."""
    if n < 0:
        raise ComplexError(f"disc needs n >= 0, got {n}", n)
    if n == 0:
        return sphere(0, ring)
    return FreeComplex(ring, {n: 1, n - 1: 1}, {n: OperatorMatrix.identity(ring, 1)})


def generating_sets(N: int, ring: CoeffRing) -> tuple[list[ChainMap], list[ChainMap]]:
    """I = {iota_n : S^(n-1) -> D^n, 0 <= n <= N} and J = {zeta_n : 0 -> D^n, 1 <= n <= N}."""
    if N < 0:
        raise ComplexError("degree bound must be non-negative")
    one = OperatorMatrix.identity(ring, 1)
    I, J = [], []
    for n in range(N + 1):
        S, Dn = sphere(n - 1, ring), disc(n, ring)
        comps = {n - 1: one} if n >= 1 else {}
        I.append(ChainMap(S, Dn, comps, f"iota_{n}"))
    for n in range(1, N + 1):
        J.append(ChainMap(zero_complex(ring), disc(n, ring), {}, f"zeta_{n}"))
    return I, J


@dataclass(frozen=True)
class HomologyReport:
    """H_n = Z_n / B_n presented by cycle generators and boundary relations."""

    degree: int
    generators: tuple  # basis of the cycles Z_n (row vectors in C_n)
    relations: OperatorMatrix  # boundaries in cycle coordinates
    diagonal: tuple  # diagonal form of the relation matrix
    free_rank: int
    torsion: tuple  # non-unit diagonal entries
    is_zero: bool

    @property
    def dimension(self) -> int:
        """Vector-space dimension (fields only)."""
        if self.torsion:
            raise ValueError("torsion present; no dimension")
        return self.free_rank


def homology(C: FreeComplex, n: int) -> HomologyReport:
    R = C.ring
    Z = kernel(C.diff(n)).generators
    k = len(Z)
    Zmat = OperatorMatrix.from_rows(R, Z, C.rank(n)) if k else OperatorMatrix.zero(R, 0, C.rank(n))
    Bn1 = C.diff(n + 1)
    rel = []
    for b in Bn1.entries:
        coords = solve(Zmat, b)
        if coords is None:  # only possible if d^2 != 0
            raise ComplexError(f"boundary outside cycles in degree {n}", n)
        rel.append(coords)
    Rel = OperatorMatrix.from_rows(R, rel, k) if rel else OperatorMatrix.zero(R, 0, k)
    # exactness by membership: every cycle generator must be a boundary
    exact = all(solve(Bn1, z) is not None for z in Z)
    F = diagonal_form(Rel)
    nonzero = [a for a in F.diag if not R.is_zero(a)]
    torsion = tuple(a for a in nonzero if not R.is_unit(a))
    free_rank = k - len(nonzero)
    if exact != (free_rank == 0 and not torsion):
        raise AssertionError("homology: membership test disagrees with diagonal form")
    return HomologyReport(n, tuple(Z), Rel, F.diag, free_rank, torsion, exact)


def cone(f: ChainMap) -> FreeComplex:
    """Mapping cone: cone_n = X_(n-1) + Y_n, d(x, y) = (-d x, f(x) + d y)."""
    X, Y, R = f.source, f.target, f.ring
    top = max(X.top + 1, Y.top)
    ranks = {n: X.rank(n - 1) + Y.rank(n) for n in range(0, top + 1)}
    diffs = {}
    for n in range(1, top + 1):
        upper = (-X.diff(n - 1)).hstack(f.component(n - 1)) if n >= 2 else \
            OperatorMatrix.zero(R, X.rank(n - 1), 0).hstack(f.component(n - 1))
        lower = OperatorMatrix.zero(R, Y.rank(n), X.rank(n - 2) if n >= 2 else 0).hstack(Y.diff(n))
        diffs[n] = upper.vstack(lower)
    return FreeComplex(R, ranks, diffs)


@dataclass(frozen=True)
class MorphismClassification:
    weq: bool
    fib: bool
    cof: bool
    evidence: dict = field(default_factory=dict, compare=False)

    @property
    def trivfib(self) -> bool:
        return self.weq and self.fib

    @property
    def trivcof(self) -> bool:
        return self.weq and self.cof

    def flags(self) -> dict:
        return {"cof": self.cof, "fib": self.fib, "trivcof": self.trivcof,
                "trivfib": self.trivfib, "weq": self.weq}


def classify(f: ChainMap) -> MorphismClassification:
    """Decide weq / fib / cof for a chain map with certificates."""
    R = f.ring
    C = cone(f)
    nonacyclic = [m for m in range(0, C.top + 2) if not homology(C, m).is_zero]
    not_onto = [n for n in range(1, f.top + 1) if not is_surjective(f.component(n))]
    not_mono, not_free = [], []
    for n in range(0, f.top + 1):
        M = f.component(n)
        if not is_injective(M):
            not_mono.append(n)
        elif not diagonal_form(M).cokernel_free():
            not_free.append(n)
    evidence = {
        "cone_nonzero_homology_degrees": nonacyclic,
        "non_surjective_degrees": not_onto,
        "non_injective_degrees": not_mono,
        "non_free_cokernel_degrees": not_free,
        "ring": R.spec,
    }
    return MorphismClassification(
        weq=not nonacyclic, fib=not not_onto, cof=not not_mono and not not_free, evidence=evidence)


def direct_sum(*Cs: FreeComplex) -> FreeComplex:
    R = Cs[0].ring
    top = max(C.top for C in Cs)
    ranks = {n: sum(C.rank(n) for C in Cs) for n in range(top + 1)}
    diffs = {n: block_diag(R, *(C.diff(n) for C in Cs)) for n in range(1, top + 1)}
    return FreeComplex(R, ranks, diffs)


@dataclass(frozen=True)
class Colimit:
    obj: FreeComplex
    injections: tuple  # one ChainMap per stage of the chain

    def factor(self, cocone: Sequence[ChainMap], maps: Sequence[ChainMap]) -> ChainMap:
        """Unique u with u o inj_i == cocone_i; raises if the cocone is not compatible."""
        if len(cocone) != len(self.injections):
            raise ComplexError("cocone has the wrong number of legs")
        for i, f in enumerate(maps):
            if f.then(cocone[i + 1]) != cocone[i]:
                raise ComplexError(f"cocone leg {i} is not compatible with the chain")
        u = cocone[-1]
        for inj, leg in zip(self.injections, cocone):
            if inj.then(u) != leg:
                raise ComplexError("factorization failed")
        return u


def colim_sequential(maps: Sequence[ChainMap], start: FreeComplex | None = None) -> Colimit:
    """Colimit of a finite chain C_0 -> ... -> C_k, taken degreewise.

    For a finite chain the direct limit is the last stage; the injections are
    the composites of the remaining maps.
    """
    if not maps:
        if start is None:
            raise ComplexError("empty chain needs a starting complex")
        return Colimit(start, (ChainMap.identity(start),))
    if start is not None and start != maps[0].source:
        raise ComplexError("start does not match the first map")
    for i in range(len(maps) - 1):
        if maps[i].target != maps[i + 1].source:
            raise ComplexError(f"maps {i} and {i + 1} are not composable")
    last = maps[-1].target
    inj = [ChainMap.identity(last)]
    for f in reversed(maps):
        inj.append(f.then(inj[-1]))
    return Colimit(last, tuple(reversed(inj)))
