"""Exact linear algebra over a field or over Weyl1.

Convention (fixed once for the whole package): an element of the free left
module of rank m is a row tuple, and an m x n matrix M is the map v -> v*M.
Row operations are left multiplications, so left kernels and solvability
come out of a single Hermite-style row reduction ``U*M = H``.

Pivot rule for the reduction: least d-degree, then least coefficient
degree, then lowest row index.  Over a field every nonzero entry has size
(0, 0), so this degenerates to "first nonzero row", which is also what the
prime-field kernel in ``_kernels`` does.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels
from .ore import RingMismatchError
from .rings import CoeffRing, PrimeField

__all__ = [
    "OperatorMatrix",
    "KernelBasis",
    "DiagonalForm",
    "kernel",
    "solve",
    "diagonal_form",
    "is_injective",
    "is_surjective",
    "rank",
    "cokernel_is_free",
    "vecmat",
    "sparse_rank",
]


class OperatorMatrix:
    """Immutable rows x cols matrix over a coefficient ring."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: CoeffRing, rows: int, cols: int, entries: Iterable[Iterable] = None):
        self.ring = ring
        self.rows, self.cols = rows, cols
        if entries is None:
            z = ring.zero()
            self.entries = tuple((z,) * cols for _ in range(rows))
        else:
            ent = tuple(tuple(ring.coerce(a) for a in row) for row in entries)
            if len(ent) != rows or any(len(r) != cols for r in ent):
                raise ValueError(f"entries do not match shape {rows}x{cols}")
            self.entries = ent

    @classmethod
    def _raw(cls, ring, rows, cols, entries):
        M = object.__new__(cls)
        M.ring, M.rows, M.cols, M.entries = ring, rows, cols, entries
        return M

    @classmethod
    def identity(cls, ring: CoeffRing, n: int) -> "OperatorMatrix":
        z, o = ring.zero(), ring.one()
        return cls._raw(ring, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, ring: CoeffRing, rows: int, cols: int) -> "OperatorMatrix":
        return cls(ring, rows, cols)

    @classmethod
    def from_rows(cls, ring: CoeffRing, rows: Sequence[Sequence], cols: int | None = None) -> "OperatorMatrix":
        rows = list(rows)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(ring, len(rows), cols, rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def _check(self, other: "OperatorMatrix"):
        if not isinstance(other, OperatorMatrix):
            raise TypeError(f"expected OperatorMatrix, got {type(other).__name__}")
        if other.ring != self.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")

    def __eq__(self, other):
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        return (self.ring == other.ring and self.shape == other.shape
                and all(self.ring.is_zero(self.ring.sub(a, b))
                        for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb)))

    def __hash__(self):
        return hash((self.ring, self.shape))

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        R = self.ring
        cols = [other.column(j) for j in range(other.cols)]
        out = []
        z = R.zero()
        for row in self.entries:
            nz = [(k, a) for k, a in enumerate(row) if not R.is_zero(a)]
            new = []
            for col in cols:
                acc = z
                for k, a in nz:
                    b = col[k]
                    if not R.is_zero(b):
                        acc = R.add(acc, R.mul(a, b))
                new.append(acc)
            out.append(tuple(new))
        return OperatorMatrix._raw(R, self.rows, other.cols, tuple(out))

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        R = self.ring
        return OperatorMatrix._raw(R, self.rows, self.cols, tuple(
            tuple(R.add(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries)))

    def __neg__(self):
        R = self.ring
        return OperatorMatrix._raw(R, self.rows, self.cols,
                                   tuple(tuple(R.neg(a) for a in r) for r in self.entries))

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(a) for r in self.entries for a in r)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == OperatorMatrix.identity(self.ring, self.rows)

    def hstack(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check(other)
        if self.rows != other.rows:
            raise ValueError("hstack needs equal row counts")
        return OperatorMatrix._raw(self.ring, self.rows, self.cols + other.cols,
                                   tuple(a + b for a, b in zip(self.entries, other.entries)))

    def vstack(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check(other)
        if self.cols != other.cols:
            raise ValueError("vstack needs equal column counts")
        return OperatorMatrix._raw(self.ring, self.rows + other.rows, self.cols,
                                   self.entries + other.entries)

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "OperatorMatrix":
        return OperatorMatrix._raw(self.ring, r1 - r0, c1 - c0,
                                   tuple(tuple(r[c0:c1]) for r in self.entries[r0:r1]))

    def to_numpy(self) -> np.ndarray:
        if not isinstance(self.ring, PrimeField):
            raise TypeError("to_numpy is only defined over prime fields")
        return np.array(self.entries, dtype=np.int64).reshape(self.rows, self.cols)

    def format(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        for r in self.entries:
            lines.append(" ".join(_token(self.ring.fmt(a)) for a in r))
        return "\n".join(lines)

    def __repr__(self):
        return f"OperatorMatrix({self.ring}, {self.rows}x{self.cols})"


def _token(s: str) -> str:
    # matrix entries are whitespace separated; keep compound entries intact
    return s.replace(" ", "")


def block_diag(ring: CoeffRing, *mats: OperatorMatrix) -> OperatorMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    z = ring.zero()
    out = []
    c0 = 0
    for m in mats:
        for r in m.entries:
            out.append((z,) * c0 + tuple(r) + (z,) * (cols - c0 - m.cols))
        c0 += m.cols
    return OperatorMatrix._raw(ring, rows, cols, tuple(out))


def vecmat(ring: CoeffRing, v: Sequence, M: OperatorMatrix) -> tuple:
    """Row vector times matrix."""
    if len(v) != M.rows:
        raise ValueError(f"vector of length {len(v)} against {M.rows} rows")
    z = ring.zero()
    out = [z] * M.cols
    for k, a in enumerate(v):
        if ring.is_zero(a):
            continue
        for j, b in enumerate(M.entries[k]):
            if not ring.is_zero(b):
                out[j] = ring.add(out[j], ring.mul(a, b))
    return tuple(out)


@dataclass(frozen=True)
class KernelBasis:
    generators: tuple

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


@dataclass(frozen=True)
class _Echelon:
    H: list  # reduced rows
    U: list  # transform rows, U*M = H
    pivots: list  # (row, col) with row == position


def _echelon_generic(M: OperatorMatrix) -> _Echelon:
    R = M.ring
    m, n = M.rows, M.cols
    H = [list(r) for r in M.entries]
    z, o = R.zero(), R.one()
    U = [[o if i == j else z for j in range(m)] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            cand = [(R.size(H[i][c]), i) for i in range(r, m) if not R.is_zero(H[i][c])]
            if not cand:
                break
            _, k = min(cand)
            if k != r:
                H[r], H[k] = H[k], H[r]
                U[r], U[k] = U[k], U[r]
            piv = H[r][c]
            done = True
            for i in range(r + 1, m):
                a = H[i][c]
                if R.is_zero(a):
                    continue
                q, rem = R.left_divide(a, piv)
                if not R.is_zero(q):
                    H[i] = [R.sub(x, R.mul(q, y)) for x, y in zip(H[i], H[r])]
                    U[i] = [R.sub(x, R.mul(q, y)) for x, y in zip(U[i], U[r])]
                if not R.is_zero(rem):
                    done = False
            if done:
                pivots.append((r, c))
                r += 1
                break
        # column without a pivot below row r: move on
    return _Echelon(H, U, pivots)


def _echelon_fp(M: OperatorMatrix) -> _Echelon:
    R = M.ring
    m, n = M.rows, M.cols
    a = np.zeros((m, n + m), dtype=np.int64)
    if m and n:
        a[:, :n] = M.to_numpy()
    a[np.arange(m), n + np.arange(m)] = 1
    piv = _kernels.rref_mod_p(a, n, R.p)
    H = [[int(v) for v in row[:n]] for row in a]
    U = [[int(v) for v in row[n:]] for row in a]
    return _Echelon(H, U, [(i, int(c)) for i, c in enumerate(piv)])


def _echelon(M: OperatorMatrix) -> _Echelon:
    if isinstance(M.ring, PrimeField):
        return _echelon_fp(M)
    return _echelon_generic(M)


def kernel(M: OperatorMatrix) -> KernelBasis:
    """Generators of {v : v*M = 0}; a basis (the kernel is free here)."""
    E = _echelon(M)
    r = len(E.pivots)
    return KernelBasis(tuple(tuple(E.U[i]) for i in range(r, M.rows)))


def rank(M: OperatorMatrix) -> int:
    """Number of pivots of the row reduction (the rank over a field)."""
    return len(_echelon(M).pivots)


def solve(M: OperatorMatrix, b: Sequence) -> Optional[tuple]:
    """Some v with v*M = b, or None when b is outside the row module."""
    R = M.ring
    if len(b) != M.cols:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {M.cols} columns")
    res = [R.coerce(x) if not isinstance(R, PrimeField) else R.coerce(x) for x in b]
    E = _echelon(M)
    w = [R.zero()] * M.rows
    for i, c in E.pivots:
        a = res[c]
        if R.is_zero(a):
            continue
        q, rem = R.left_divide(a, E.H[i][c])
        if not R.is_zero(rem):
            return None
        w[i] = q
        res = [R.sub(x, R.mul(q, y)) for x, y in zip(res, E.H[i])]
    if any(not R.is_zero(x) for x in res):
        return None
    z = R.zero()
    v = [z] * M.rows
    for i, wi in enumerate(w):
        if R.is_zero(wi):
            continue
        v = [R.add(x, R.mul(wi, y)) for x, y in zip(v, E.U[i])]
    return tuple(v)


def is_injective(M: OperatorMatrix) -> bool:
    return len(kernel(M)) == 0


def is_surjective(M: OperatorMatrix) -> bool:
    R = M.ring
    if R.is_field:
        return rank(M) == M.cols
    z, o = R.zero(), R.one()
    for j in range(M.cols):
        e = [o if k == j else z for k in range(M.cols)]
        if solve(M, e) is None:
            return False
    return True


@dataclass(frozen=True)
class DiagonalForm:
    """U*M*V = diag, with explicit inverses of both transforms."""

    diag: tuple
    U: OperatorMatrix
    V: OperatorMatrix
    U_inv: OperatorMatrix
    V_inv: OperatorMatrix
    D: OperatorMatrix

    def cokernel_free(self) -> bool:
        R = self.D.ring
        return all(R.is_zero(a) or R.is_unit(a) for a in self.diag)

    def nonunit_entries(self) -> list:
        R = self.D.ring
        return [a for a in self.diag if not R.is_zero(a) and not R.is_unit(a)]


def diagonal_form(M: OperatorMatrix) -> DiagonalForm:
    """Jacobson-style diagonalization by alternating row and column clearing."""
    R = M.ring
    m, n = M.rows, M.cols
    A = [list(r) for r in M.entries]
    z, o = R.zero(), R.one()
    U = [[o if i == j else z for j in range(m)] for i in range(m)]
    Ui = [row[:] for row in U]
    V = [[o if i == j else z for j in range(n)] for i in range(n)]
    Vi = [row[:] for row in V]

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]
        for row in Ui:
            row[i], row[k] = row[k], row[i]

    def swap_cols(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]
        Vi[j], Vi[k] = Vi[k], Vi[j]

    def row_axpy(i, q, t):  # row_i -= q * row_t
        A[i] = [R.sub(x, R.mul(q, y)) for x, y in zip(A[i], A[t])]
        U[i] = [R.sub(x, R.mul(q, y)) for x, y in zip(U[i], U[t])]
        for row in Ui:  # col_t += col_i * q
            row[t] = R.add(row[t], R.mul(row[i], q))

    def col_axpy(j, q, t):  # col_j -= col_t * q
        for row in A:
            row[j] = R.sub(row[j], R.mul(row[t], q))
        for row in V:
            row[j] = R.sub(row[j], R.mul(row[t], q))
        Vi[t] = [R.add(x, R.mul(q, y)) for x, y in zip(Vi[t], Vi[j])]  # row_t += q * row_j

    def scale_row(t, u):
        uinv = R.inv(u)
        A[t] = [R.mul(u, x) for x in A[t]]
        U[t] = [R.mul(u, x) for x in U[t]]
        for row in Ui:
            row[t] = R.mul(row[t], uinv)

    t = 0
    while t < min(m, n):
        cand = [(R.size(A[i][j]), i, j) for i in range(t, m) for j in range(t, n)
                if not R.is_zero(A[i][j])]
        if not cand:
            break
        _, i, j = min(cand)
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)
        while True:
            for i in range(t + 1, m):
                if not R.is_zero(A[i][t]):
                    q, _ = R.left_divide(A[i][t], A[t][t])
                    if not R.is_zero(q):
                        row_axpy(i, q, t)
            for j in range(t + 1, n):
                if not R.is_zero(A[t][j]):
                    q, _ = R.right_divide(A[t][j], A[t][t])
                    if not R.is_zero(q):
                        col_axpy(j, q, t)
            rest = [(R.size(A[i][t]), i, t) for i in range(t + 1, m) if not R.is_zero(A[i][t])]
            rest += [(R.size(A[t][j]), t, j) for j in range(t + 1, n) if not R.is_zero(A[t][j])]
            if not rest:
                break
            _, i, j = min(rest)
            if i != t:
                swap_rows(t, i)
            else:
                swap_cols(t, j)
        lead = _leading_unit(R, A[t][t])
        if lead is not None:
            scale_row(t, lead)
        t += 1

    diag = tuple(A[i][i] for i in range(min(m, n)))
    mk = lambda rows, r, c: OperatorMatrix._raw(R, r, c, tuple(tuple(x) for x in rows))
    return DiagonalForm(diag, mk(U, m, m), mk(V, n, n), mk(Ui, m, m), mk(Vi, n, n), mk(A, m, n))


def _leading_unit(R: CoeffRing, a):
    """Unit that normalizes a to leading coefficient 1, or None if already so."""
    if R.is_zero(a):
        return None
    if R.is_field:
        return None if R.is_one(a) else R.inv(a)
    lc = a.lead
    if lc == 1:
        return None
    return R.coerce(lc.inverse())


def cokernel_is_free(M: OperatorMatrix) -> bool:
    return diagonal_form(M).cokernel_free()


def sparse_rank(rows: list[dict], ring: CoeffRing) -> int:
    """Rank over a field of a matrix given as a list of {column: value} rows."""
    if not ring.is_field:
        raise RingMismatchError("sparse_rank needs a field")
    pivots: dict = {}  # column -> reduced row with leading entry 1 at that column
    r = 0
    for row in rows:
        v = {k: a for k, a in row.items() if not ring.is_zero(a)}
        while v:
            c = min(v)
            if c not in pivots:
                inv = ring.inv(v[c])
                pivots[c] = {k: ring.mul(a, inv) for k, a in v.items()}
                r += 1
                break
            f = v[c]
            for k, a in pivots[c].items():
                nv = ring.sub(v.get(k, ring.zero()), ring.mul(f, a))
                if ring.is_zero(nv):
                    v.pop(k, None)
                else:
                    v[k] = nv
    return r
