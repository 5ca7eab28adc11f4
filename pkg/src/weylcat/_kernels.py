"""Dense elimination modulo a prime.

The hot loop of every prime-field kernel/solve/rank call lives here.  Two
implementations share one contract:

* ``_rref_numba``: ``@njit`` scalar loops (default when numba imports);
* ``_rref_numpy``: vectorized row updates, used when ``WEYLCAT_NUMBA=0`` or
  numba is unavailable.

Both reduce the first ``ncols`` columns of an int64 matrix in place by
Gauss-Jordan elimination over F_p, choosing as pivot the first row (at or
below the current one) with a nonzero entry, and return the pivot columns.
Trailing columns are carried along, which is how kernels and solutions are
read off an augmented matrix.  Entries stay in ``[0, p)``; ``p < 2**31``
keeps every intermediate product inside int64.
"""
from __future__ import annotations

import os

import numpy as np

__all__ = ["rref_mod_p", "backend", "set_backend", "NUMBA_AVAILABLE"]

try:  # pragma: no cover - exercised implicitly
    from numba import njit

    NUMBA_AVAILABLE = True
except Exception:  # pragma: no cover
    NUMBA_AVAILABLE = False

MAX_PRIME = 2**31 - 1


def _rref_numpy(a: np.ndarray, ncols: int, p: int) -> np.ndarray:
    m = a.shape[0]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = a[r] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            a[rows] = (a[rows] - np.outer(col[rows], a[r])) % p
        pivots.append(c)
        r += 1
    return np.array(pivots, dtype=np.int64)


if NUMBA_AVAILABLE:

    @njit(cache=False)
    def _inv_mod(a, p):
        # extended Euclid; a is nonzero mod p
        t, newt = 0, 1
        r, newr = p, a
        while newr != 0:
            q = r // newr
            t, newt = newt, t - q * newt
            r, newr = newr, r - q * newr
        if t < 0:
            t += p
        return t

    @njit(cache=False)
    def _rref_numba(a, ncols, p):
        m, n = a.shape
        pivots = np.empty(min(m, ncols), dtype=np.int64)
        npiv = 0
        r = 0
        for c in range(ncols):
            if r == m:
                break
            k = -1
            for i in range(r, m):
                if a[i, c] != 0:
                    k = i
                    break
            if k < 0:
                continue
            if k != r:
                for j in range(n):
                    tmp = a[r, j]
                    a[r, j] = a[k, j]
                    a[k, j] = tmp
            inv = _inv_mod(a[r, c], p)
            for j in range(n):
                a[r, j] = a[r, j] * inv % p
            for i in range(m):
                if i != r:
                    f = a[i, c]
                    if f != 0:
                        for j in range(n):
                            a[i, j] = (a[i, j] - f * a[r, j]) % p
            pivots[npiv] = c
            npiv += 1
            r += 1
        return pivots[:npiv]


def _env_backend() -> str:
    flag = os.environ.get("WEYLCAT_NUMBA", "1").strip().lower()
    if flag in ("0", "false", "no", "off") or not NUMBA_AVAILABLE:
        return "numpy"
    return "numba"


_backend = _env_backend()


def backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    """Switch implementation at runtime ("numba" or "numpy")."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(name)
    if name == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError("numba is not importable")
    _backend = name


def rref_mod_p(a: np.ndarray, ncols: int, p: int, impl: str | None = None) -> np.ndarray:
    """Reduce ``a`` in place; returns the pivot column indices."""
    if not 2 <= p <= MAX_PRIME:
        raise ValueError(f"prime {p} outside the int64-safe range")
    if a.dtype != np.int64:
        raise TypeError("rref_mod_p works on int64 arrays")
    impl = impl or _backend
    if a.size == 0:
        return np.zeros(0, dtype=np.int64)
    if impl == "numba":
        return _rref_numba(a, ncols, p)
    return _rref_numpy(a, ncols, p)
