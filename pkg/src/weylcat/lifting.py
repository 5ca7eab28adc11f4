"""Lifting problems in Ch+ and the one-stage disc-gluing factorization.

A square

        top
    A ------> X
    |         |
  i |         | p
    v         v
    B ------> Y
       bottom

is solved degree by degree over the cells of B not coming from A.  The left
edge must be a cellular inclusion: every component of ``i`` is ``[1 | 0]``,
so B_n = A_n + E_n with E_n spanned by the new cells.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .chain import ChainMap, ComplexError, FreeComplex, classify, generating_sets
from .linalg import OperatorMatrix, is_surjective, kernel, solve, vecmat
from .rings import CoeffRing, PrimeField

__all__ = [
    "LiftError",
    "LiftingSquare",
    "LiftCertificate",
    "CellStructure",
    "cell_structure",
    "solve_lift",
    "RLPReport",
    "rlp_suite",
    "factor_trivcof_fib",
]


class LiftError(ValueError):
    pass


class LiftingSquare:
    __slots__ = ("i", "p", "top", "bottom")

    def __init__(self, i: ChainMap, p: ChainMap, top: ChainMap, bottom: ChainMap):
        if top.source != i.source or bottom.source != i.target:
            raise LiftError("left edge does not match top/bottom sources")
        if top.target != p.source or bottom.target != p.target:
            raise LiftError("right edge does not match top/bottom targets")
        if top.then(p) != i.then(bottom):
            raise LiftError("square does not commute")
        self.i, self.p, self.top, self.bottom = i, p, top, bottom


@dataclass(frozen=True)
class LiftCertificate:
    lift: ChainMap | None
    residual: tuple | None = None  # (degree, cell index in B, right-hand side)

    @property
    def found(self) -> bool:
        return self.lift is not None


@dataclass(frozen=True)
class CellStructure:
    """New cells of B relative to A.

    ``discs`` holds pairs (n, top_index, bottom_index) with d(top) = bottom and
    d(bottom) = 0; every other new cell is a sphere cell with arbitrary boundary.
    Indices are positions in the basis of B in the respective degree.
    """

    offset: dict  # degree -> rank of A
    discs: tuple
    spheres: tuple  # (n, index)


def _is_unit_vector(R: CoeffRing, v: Sequence, j: int) -> bool:
    return all(R.is_one(a) if k == j else R.is_zero(a) for k, a in enumerate(v))


def cell_structure(i: ChainMap) -> CellStructure:
    """Check that ``i`` is a cellular inclusion and pair up disc cells greedily."""
    R, A, B = i.ring, i.source, i.target
    for n in range(i.top + 1):
        a, b = A.rank(n), B.rank(n)
        M = i.component(n)
        want = OperatorMatrix.identity(R, a).hstack(OperatorMatrix.zero(R, a, b - a)) if b >= a else None
        if want is None or M != want:
            raise LiftError(f"left edge is not a cellular inclusion in degree {n}")
    offset = {n: A.rank(n) for n in range(B.top + 1)}
    taken: set = set()
    discs, spheres = [], []
    for n in range(B.top + 1):
        for j in range(offset[n], B.rank(n)):
            if (n, j) in taken:
                continue
            row = B.diff(n).row(j) if n >= 1 else ()
            partner = None
            for k in range(offset.get(n - 1, 0), B.rank(n - 1)):
                if (n - 1, k) in taken:
                    continue
                if _is_unit_vector(R, row, k) and B.diff(n - 1).row(k) == tuple(
                        R.zero() for _ in range(B.rank(n - 2))):
                    partner = k
                    break
            if partner is not None:
                # the bottom was provisionally a sphere cell of degree n-1
                if (n - 1, partner) in spheres:
                    spheres.remove((n - 1, partner))
                taken.add((n - 1, partner))
                taken.add((n, j))
                discs.append((n, j, partner))
            else:
                spheres.append((n, j))
    return CellStructure(offset, tuple(discs), tuple(spheres))


def solve_lift(square: LiftingSquare, cells: CellStructure | None = None) -> LiftCertificate:
    """Construct l : B -> X with l o i = top and p o l = bottom, or report the obstruction."""
    i, p, top, bottom = square.i, square.p, square.top, square.bottom
    R = i.ring
    B, X = i.target, p.source
    cells = cells or cell_structure(i)
    rows: dict = {n: [None] * B.rank(n) for n in range(B.top + 1)}
    for n in range(B.top + 1):
        for j in range(cells.offset[n]):
            rows[n][j] = top.component(n).row(j)
    disc_by_deg: dict = {}
    for n, t, b in cells.discs:
        disc_by_deg.setdefault(n, []).append((t, b))
    sph_by_deg: dict = {}
    for n, j in cells.spheres:
        sph_by_deg.setdefault(n, []).append(j)
    for n in range(B.top + 1):
        pn, dX = p.component(n), X.diff(n)
        for t, b in disc_by_deg.get(n, ()):
            target = bottom.component(n).row(t)
            x = solve(pn, target)
            if x is None:
                return LiftCertificate(None, (n, t, target))
            rows[n][t] = x
            rows[n - 1][b] = vecmat(R, x, dX)
        for j in sph_by_deg.get(n, ()):
            bnd = B.diff(n).row(j) if n >= 1 else ()
            lbnd = _apply_rows(R, bnd, rows.get(n - 1, []), X.rank(n - 1))
            rhs = tuple(bottom.component(n).row(j)) + tuple(lbnd)
            x = solve(pn.hstack(dX), rhs)
            if x is None:
                return LiftCertificate(None, (n, j, rhs))
            rows[n][j] = x
    comps = {n: OperatorMatrix.from_rows(R, rows[n], X.rank(n)) for n in rows if rows[n]}
    lift = ChainMap(B, X, comps, "lift")
    if i.then(lift) != top or lift.then(p) != bottom:
        raise AssertionError("constructed lift violates a triangle identity")
    return LiftCertificate(lift)


def _apply_rows(R, v, rows, width):
    out = [R.zero()] * width
    for a, r in zip(v, rows):
        if R.is_zero(a):
            continue
        out = [R.add(o, R.mul(a, e)) for o, e in zip(out, r)]
    return out


@dataclass
class RLPReport:
    testset: str
    squares: int = 0
    lifts: int = 0
    failures: list = field(default_factory=list)  # (generator label, residual)
    exhaustive: bool = True
    expected: bool = True  # classify(p) says the lifts must exist

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def consistent(self) -> bool:
        return self.passed == self.expected


def _combos(R: CoeffRing, basis: list, rng: random.Random, samples: int, cap: int):
    """Every combination of ``basis`` when the field is small, else basis + seeded samples."""
    k = len(basis)
    if not k:
        return [], True
    width = len(basis[0])
    if isinstance(R, PrimeField) and R.p ** k <= cap:
        out = []
        for coeffs in itertools.product(range(R.p), repeat=k):
            out.append(_apply_rows(R, coeffs, basis, width))
        return out, True
    out = [list(b) for b in basis]
    for _ in range(samples):
        coeffs = [R.random_element(rng, 1) for _ in range(k)]
        out.append(_apply_rows(R, coeffs, basis, width))
    return out, False


def _disc_map(R, Dn: FreeComplex, Y: FreeComplex, n: int, y) -> ChainMap:
    comps = {n: OperatorMatrix.from_rows(R, [y], Y.rank(n))}
    if n >= 1:
        comps[n - 1] = OperatorMatrix.from_rows(R, [vecmat(R, y, Y.diff(n))], Y.rank(n - 1))
    return ChainMap(Dn, Y, comps)


def rlp_suite(p: ChainMap, testset: str, N: int, seed: int = 0, samples: int = 50,
              cap: int = 1024) -> RLPReport:
    """Run solve_lift on squares against I or J up to degree N."""
    if testset not in ("I", "J"):
        raise ValueError("testset must be 'I' or 'J'")
    R, X, Y = p.ring, p.source, p.target
    rng = random.Random(seed)
    I, J = generating_sets(N, R)
    cls = classify(p)
    rep = RLPReport(testset, expected=cls.fib if testset == "J" else cls.trivfib)
    for g in (J if testset == "J" else I):
        n = int(g.label.split("_")[1])
        A, Dn = g.source, g.target
        if testset == "J":
            basis = [tuple(R.one() if k == j else R.zero() for k in range(Y.rank(n)))
                     for j in range(Y.rank(n))]
            cands, ex = _combos(R, basis, rng, samples, cap)
            squares = [(ChainMap.zero(A, X), _disc_map(R, Dn, Y, n, y)) for y in cands]
        else:
            # pairs (x, y): x a cycle of X_(n-1), y in Y_n, with p(x) = d y
            a, b = X.rank(n - 1), Y.rank(n)
            if n == 0:
                M = OperatorMatrix.zero(R, b, 0)
            else:
                upper = X.diff(n - 1).hstack(p.component(n - 1))
                lower = OperatorMatrix.zero(R, b, X.rank(n - 2)).hstack(-Y.diff(n))
                M = upper.vstack(lower)
            basis = list(kernel(M).generators)
            cands, ex = _combos(R, basis, rng, samples, cap)
            squares = []
            for v in cands:
                x, y = v[:a], v[a:]
                if n >= 1:
                    t = ChainMap(A, X, {n - 1: OperatorMatrix.from_rows(R, [x], X.rank(n - 1))})
                else:
                    t = ChainMap.zero(A, X)
                squares.append((t, _disc_map(R, Dn, Y, n, y)))
        rep.exhaustive = rep.exhaustive and ex
        cells = cell_structure(g)
        for t, bmap in squares:
            rep.squares += 1
            cert = solve_lift(LiftingSquare(g, p, t, bmap), cells)
            if cert.found:
                rep.lifts += 1
            else:
                rep.failures.append((g.label, cert.residual))
    return rep


def factor_trivcof_fib(f: ChainMap, gens: Sequence[tuple] | None = None) -> tuple[ChainMap, ChainMap]:
    """Factor f : X -> Y as X -> X + P -> Y, with P one disc per generator.

    ``gens`` is a list of (degree n >= 1, row vector of Y_n); by default the
    standard basis of Y in positive degrees.  The disc of g maps its top cell
    to g and its bottom cell to d g.
    """
    R, X, Y = f.ring, f.source, f.target
    if gens is None:
        gens = [(n, tuple(R.one() if k == j else R.zero() for k in range(Y.rank(n))))
                for n in range(1, Y.top + 1) for j in range(Y.rank(n))]
    gens = [(n, tuple(R.coerce(a) for a in g)) for n, g in gens]
    for n, g in gens:
        if n < 1:
            raise ComplexError("generators must sit in positive degrees", n)
        if len(g) != Y.rank(n):
            raise ComplexError(f"generator has length {len(g)}, Y_{n} has rank {Y.rank(n)}", n)
    for n in range(1, Y.top + 1):
        G = [g for m, g in gens if m == n]
        M = OperatorMatrix.from_rows(R, G, Y.rank(n)) if G else OperatorMatrix.zero(R, 0, Y.rank(n))
        if not is_surjective(M):
            raise ComplexError(f"generators do not span Y_{n}", n)
    # cells of P per degree, in generator order: ("top", g) in deg n, ("bot", g) in deg n-1
    cells: dict = {}
    for idx, (n, g) in enumerate(gens):
        cells.setdefault(n, []).append(("top", idx))
        cells.setdefault(n - 1, []).append(("bot", idx))
    for n in cells:  # tops before bottoms inside a degree, stable otherwise
        cells[n].sort(key=lambda c: (c[0] != "top",))
    top = max([X.top, Y.top] + list(cells))
    ranks = {n: X.rank(n) + len(cells.get(n, [])) for n in range(top + 1)}
    pos = {n: {c: X.rank(n) + k for k, c in enumerate(cells.get(n, []))} for n in range(top + 1)}
    z, o = R.zero(), R.one()
    diffs = {}
    for n in range(1, top + 1):
        rows = [list(r) + [z] * len(cells.get(n - 1, [])) for r in X.diff(n).entries]
        for c in cells.get(n, []):
            row = [z] * ranks[n - 1]
            if c[0] == "top":
                row[pos[n - 1][("bot", c[1])]] = o
            rows.append(row)
        diffs[n] = OperatorMatrix.from_rows(R, rows, ranks[n - 1])
    XP = FreeComplex(R, ranks, diffs)
    icomp, pcomp = {}, {}
    for n in range(top + 1):
        icomp[n] = OperatorMatrix.identity(R, X.rank(n)).hstack(
            OperatorMatrix.zero(R, X.rank(n), ranks[n] - X.rank(n)))
        prow = [list(r) for r in f.component(n).entries]
        for kind, idx in cells.get(n, []):
            g = gens[idx][1]
            prow.append(list(g) if kind == "top" else list(vecmat(R, g, Y.diff(n + 1))))
        pcomp[n] = OperatorMatrix.from_rows(R, prow, Y.rank(n))
    i = ChainMap(X, XP, icomp, "i")
    p = ChainMap(XP, Y, pcomp, "p")
    if i.then(p) != f:
        raise AssertionError("p o i != f")
    return i, p
