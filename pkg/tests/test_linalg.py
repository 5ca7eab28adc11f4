import os
import random
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from weylcat import _kernels
from weylcat.linalg import (OperatorMatrix, cokernel_is_free, diagonal_form, is_injective, is_surjective,
                            kernel, rank, solve, sparse_rank, vecmat)
from weylcat.ore import D, ONE, X, OreOperator
from weylcat.rings import GF, QQ, WEYL1

W = WEYL1


def M(ring, rows):
    return OperatorMatrix.from_rows(ring, rows, len(rows[0]) if rows else 0)


def in_row_module(gens, v, ring, width):
    if not gens:
        return all(ring.is_zero(a) for a in v)
    return solve(OperatorMatrix.from_rows(ring, gens, width), v) is not None


# -- spec examples ------------------------------------------------------------------

@pytest.mark.parametrize("ring", [QQ, GF(3), W])
def test_identity_kernel_empty(ring):
    assert len(kernel(OperatorMatrix.identity(ring, 3))) == 0


def test_kernel_contains_x_minus_one():
    A = M(W, [[D], [X * D]])
    K = kernel(A).generators
    target = (X, -ONE)
    # the witness is a genuine relation, by operator arithmetic
    assert X * D + (-ONE) * (X * D) == OreOperator()
    assert in_row_module(list(K), target, W, 2)
    # every generator really is in the kernel
    for g in K:
        assert all(W.is_zero(a) for a in vecmat(W, g, A))
    # completeness: re-reduce the generators; they are independent
    assert len(kernel(OperatorMatrix.from_rows(W, K, 2))) == 0


def test_kernel_of_d_empty():
    assert len(kernel(M(W, [[D]]))) == 0


def test_solve_examples():
    assert solve(OperatorMatrix.identity(QQ, 2), (3, 4)) == (3, 4)
    assert solve(M(W, [[D]]), (ONE,)) is None
    assert solve(M(QQ, [[2]]), (1,)) == (Fraction(1, 2),)


def test_diagonal_form_examples():
    A = M(W, [[ONE, OreOperator()], [OreOperator(), D]])
    F = diagonal_form(A)
    assert F.U @ A @ F.V == F.D
    assert sorted(map(str, F.diag)) == sorted(map(str, [ONE, D]))
    assert not F.cokernel_free()
    Z = OperatorMatrix.zero(QQ, 2, 3)
    assert all(QQ.is_zero(a) for a in diagonal_form(Z).diag)


def test_already_diagonal_up_to_units():
    A = M(QQ, [[2, 0], [0, 3]])
    F = diagonal_form(A)
    assert all(QQ.is_unit(a) for a in F.diag)


def test_injective_surjective():
    for R in (QQ, GF(5), W):
        I = OperatorMatrix.identity(R, 2)
        assert is_injective(I) and is_surjective(I)
    assert is_injective(M(W, [[D]])) and not is_surjective(M(W, [[D]]))
    assert is_injective(M(QQ, [[2]])) and is_surjective(M(QQ, [[2]]))


def test_row_vector_convention():
    A = M(QQ, [[1, 2], [3, 4]])
    assert vecmat(QQ, (1, 0), A) == (1, 2)


# -- properties ---------------------------------------------------------------------

def rand_matrix(R, rng, r, c, density=0.7):
    z = R.zero()
    rows = [[R.random_element(rng) if rng.random() < density else z for _ in range(c)] for _ in range(r)]
    return OperatorMatrix(R, r, c, rows)


rings = st.sampled_from([QQ, GF(2), GF(7), W])


@settings(max_examples=40, deadline=None)
@given(rings, st.integers(0, 10**6), st.integers(1, 4), st.integers(1, 4))
def test_diagonal_form_certificate(R, seed, r, c):
    rng = random.Random(seed)
    A = rand_matrix(R, rng, r, c)
    F = diagonal_form(A)
    assert F.U @ A @ F.V == F.D
    assert F.U @ F.U_inv == OperatorMatrix.identity(R, r)
    assert F.V_inv @ F.V == OperatorMatrix.identity(R, c)
    for i in range(r):
        for j in range(c):
            if i != j:
                assert R.is_zero(F.D[i, j])


@settings(max_examples=40, deadline=None)
@given(rings, st.integers(0, 10**6), st.integers(1, 4), st.integers(1, 4))
def test_kernel_and_solve(R, seed, r, c):
    rng = random.Random(seed)
    A = rand_matrix(R, rng, r, c)
    K = kernel(A).generators
    for g in K:
        assert all(R.is_zero(a) for a in vecmat(R, g, A))
    # a random combination of rows is solvable and the solution checks
    v = tuple(R.random_element(rng) for _ in range(r))
    b = vecmat(R, v, A)
    sol = solve(A, b)
    assert sol is not None and vecmat(R, sol, A) == b
    # v - sol lies in the kernel module
    diff = tuple(R.sub(a, s) for a, s in zip(v, sol))
    assert in_row_module(list(K), diff, R, r)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_rank_matches_numpy_over_q(seed):
    rng = random.Random(seed)
    A = rand_matrix(QQ, rng, 4, 5, density=0.5)
    ref = np.linalg.matrix_rank(np.array([[float(a) for a in row] for row in A.entries]))
    assert rank(A) == ref


def test_sparse_rank():
    rows = [{0: Fraction(1), 1: Fraction(2)}, {0: Fraction(2), 1: Fraction(4)}, {2: Fraction(1)}]
    assert sparse_rank(rows, QQ) == 2
    assert sparse_rank([{0: 1, 1: 1}, {0: 1, 1: 1}], GF(2)) == 1


def test_cokernel_freeness():
    assert cokernel_is_free(M(W, [[ONE, OreOperator()]]))
    assert not cokernel_is_free(M(W, [[D]]))
    # over a field every cokernel is free
    assert cokernel_is_free(M(QQ, [[0]])) and cokernel_is_free(M(QQ, [[2, 4]]))


# -- prime-field kernels -------------------------------------------------------------

@pytest.mark.skipif(not _kernels.NUMBA_AVAILABLE, reason="numba missing")
@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5, 101, 2**31 - 1]))
def test_backends_agree(seed, p):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, p, size=(6, 9), dtype=np.int64)
    a1, a2 = a.copy(), a.copy()
    p1 = _kernels.rref_mod_p(a1, 6, p, impl="numpy")
    p2 = _kernels.rref_mod_p(a2, 6, p, impl="numba")
    assert np.array_equal(p1, p2) and np.array_equal(a1, a2)


def test_backend_switch_roundtrip():
    prev = _kernels.backend()
    try:
        _kernels.set_backend("numpy")
        A = M(GF(5), [[1, 2], [2, 4]])
        assert rank(A) == 1
    finally:
        _kernels.set_backend(prev)
    with pytest.raises(ValueError):
        _kernels.set_backend("fortran")


def test_env_flag_selects_numpy():
    env = dict(os.environ, WEYLCAT_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", "from weylcat import _kernels; print(_kernels.backend())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_kernel_rejects_bad_input():
    with pytest.raises(ValueError):
        _kernels.rref_mod_p(np.zeros((2, 2), dtype=np.int64), 2, 1)
    with pytest.raises(TypeError):
        _kernels.rref_mod_p(np.zeros((2, 2)), 2, 5)
