import random

import pytest

from weylcat.chain import ChainMap, classify, disc, generating_sets, sphere, zero_complex
from weylcat.lifting import LiftError, LiftingSquare, cell_structure, factor_trivcof_fib, rlp_suite, solve_lift
from weylcat.rings import GF, QQ, WEYL1
from weylcat.samples import random_complex, random_fibration, random_nonfibration, random_trivial_fibration

RINGS = [QQ, GF(5), WEYL1]


def check_lift(sq, cert):
    assert cert.found
    assert sq.i.then(cert.lift) == sq.top
    assert cert.lift.then(sq.p) == sq.bottom


@pytest.mark.parametrize("R", RINGS)
def test_zeta_lifts_against_fibration(R):
    rng = random.Random(1)
    p = random_fibration(R, rng, max_deg=3)
    _, J = generating_sets(3, R)
    rep = rlp_suite(p, "J", 3, seed=2, samples=10)
    assert rep.passed and rep.consistent and rep.squares > 0


@pytest.mark.parametrize("R", RINGS)
def test_iota_lifts_against_trivial_fibration(R):
    rng = random.Random(4)
    p = random_trivial_fibration(R, rng, max_deg=3)
    assert classify(p).trivfib
    rep = rlp_suite(p, "I", 3, seed=5, samples=10)
    assert rep.passed and rep.consistent


def test_identity_lift_is_bottom():
    R = QQ
    I, _ = generating_sets(2, R)
    i = I[2]
    idD = ChainMap.identity(i.target)
    sq = LiftingSquare(i, idD, i, idD)
    cert = solve_lift(sq)
    check_lift(sq, cert)
    assert cert.lift == idD


def test_nonsurjective_in_degree_two_fails_zeta_two():
    R = QQ
    Y = disc(2, R)
    p = ChainMap(zero_complex(R), Y)  # not surjective in degree 2
    rep = rlp_suite(p, "J", 3, seed=0)
    assert not rep.passed
    assert any(label == "zeta_2" for label, _ in rep.failures)
    assert rep.consistent


@pytest.mark.parametrize("R", [QQ, GF(2), WEYL1])
def test_nonfibration_has_failing_square(R):
    p = random_nonfibration(R, random.Random(9), max_deg=3)
    rep = rlp_suite(p, "J", 3, seed=1, samples=10)
    assert not rep.passed and rep.consistent


def test_exhaustive_over_f2():
    p = random_fibration(GF(2), random.Random(3), max_deg=3)
    rep = rlp_suite(p, "J", 3, seed=0)
    assert rep.exhaustive and rep.passed


def test_identity_passes_everything():
    C = random_complex(QQ, random.Random(0), max_deg=3)
    for t in ("I", "J"):
        assert rlp_suite(ChainMap.identity(C), t, 3).passed


def test_square_must_commute():
    R = QQ
    I, _ = generating_sets(1, R)
    i = I[1]
    idD = ChainMap.identity(disc(1, R))
    zero = ChainMap.zero(sphere(0, R), disc(1, R))
    with pytest.raises(LiftError):
        LiftingSquare(i, idD, zero, idD)


def test_cell_structures():
    I, J = generating_sets(2, QQ)
    cs = cell_structure(I[2])  # S^1 -> D^2 attaches one sphere cell in degree 2
    assert cs.offset == {0: 0, 1: 1, 2: 0}
    assert cs.discs == () and cs.spheres == ((2, 0),)
    cs = cell_structure(J[1])  # 0 -> D^2 attaches one whole disc
    assert cs.discs == ((2, 0, 0),) and cs.spheres == ()


# -- factorization -------------------------------------------------------------------

def test_factor_zero_to_sphere():
    R = QQ
    f = ChainMap(zero_complex(R), sphere(1, R))
    i, p = factor_trivcof_fib(f)
    assert i.target.ranks == {0: 1, 1: 1}
    assert classify(p).fib and classify(i).trivcof and i.then(p) == f


def test_factor_identity_and_zero():
    R = WEYL1
    C = disc(2, R)
    i, p = factor_trivcof_fib(ChainMap.identity(C))
    assert i.then(p) == ChainMap.identity(C)
    Z = zero_complex(R)
    i, p = factor_trivcof_fib(ChainMap.identity(Z))
    assert i == ChainMap.identity(Z) and p == ChainMap.identity(Z)


@pytest.mark.parametrize("R", RINGS)
def test_factor_random(R):
    rng = random.Random(11)
    for _ in range(3):
        f = random_nonfibration(R, rng, 3) if rng.random() < 0.5 else random_fibration(R, rng, 3)
        i, p = factor_trivcof_fib(f)
        assert classify(i).trivcof and classify(p).fib and i.then(p) == f
