"""Seeded self-check suites behind ``weylcat verify``.

Each suite returns a list of ``(item, ok, info)``; ``info`` is a small
JSON-able witness (or None).  Items are sorted by name so reports do not
depend on execution order.
"""
from __future__ import annotations

import itertools
import random

from .chain import classify, disc, generating_sets, homology, sphere
from .dga import (AlgElement, AlgebraMorphism, DGAPresentation, GenSet, TensorElement, act,
                  adjunction_transpose, compare_invariants_iso, multiply,
                  random_element, random_presentation, symmetrize)
from .lifting import factor_trivcof_fib, rlp_suite
from .ore import D, ONE, X, apply_to_polynomial, left_divide, right_divide, Poly
from .rings import GF, QQ, WEYL1, ring_from_spec
from .samples import (random_algebra_chain, random_module_map, random_commuting_square, random_dga_morphism,
                      random_fibration, random_nonfibration, random_trivial_fibration)
from .sullivan import (RSDA, acyclicity_probe, check_lowering, colim_enrichment_check, factorize,
                       functorial_square)

DEFAULT_RINGS = ("Q", "Fp:5", "weyl1")


def _rings(ring):
    return [ring_from_spec(ring)] if ring else [ring_from_spec(s) for s in DEFAULT_RINGS]


def _first_fail(rng, count, check):
    for k in range(count):
        w = check(rng)
        if w is not None:
            return False, {"sample": k, "witness": w}
    return True, None


# -- ore ---------------------------------------------------------------------------

def _rand_op(rng):
    return WEYL1.random_element(rng)


def suite_ore(seed, ring=None):
    rng = random.Random(seed)
    out = [("commutator", D * X - X * D == ONE, None)]

    def prod(r):
        a, b = _rand_op(r), _rand_op(r)
        for k in range(4):
            p = Poly([0] * k + [1])
            if apply_to_polynomial(a * b, p) != apply_to_polynomial(a, apply_to_polynomial(b, p)):
                return [str(a), str(b), k]
        return None

    def ldiv(r):
        a, b = _rand_op(r), _rand_op(r)
        if b.is_zero():
            return None
        q, rem = left_divide(a, b)
        if q * b + rem != a or not (rem.is_zero() or rem.degree < b.degree):
            return [str(a), str(b)]
        return None

    def rdiv(r):
        a, b = _rand_op(r), _rand_op(r)
        if b.is_zero():
            return None
        q, rem = right_divide(a, b)
        if b * q + rem != a or not (rem.is_zero() or rem.degree < b.degree):
            return [str(a), str(b)]
        return None

    for name, fn in (("product_vs_action", prod), ("left_division", ldiv), ("right_division", rdiv)):
        ok, info = _first_fail(rng, 30, fn)
        out.append((name, ok, info))
    return out


# -- chain -------------------------------------------------------------------------

def suite_chain(seed, ring=None):
    out = []
    for R in _rings(ring):
        I, J = generating_sets(3, R)
        bad = [g.label for g in I if (lambda c: not c.cof or c.weq)(classify(g))]
        bad += [g.label for g in J if not classify(g).trivcof]
        out.append((f"generating_sets[{R.spec}]", not bad, bad or None))
        bad = []
        for n in range(1, 4):
            Dn, Sn = disc(n, R), sphere(n, R)
            for m in range(n + 2):
                if not homology(Dn, m).is_zero:
                    bad.append(f"D{n}:H{m}")
                H = homology(Sn, m)
                if (m == n) != (H.free_rank == 1 and not H.torsion) or (m != n and not H.is_zero):
                    bad.append(f"S{n}:H{m}")
        out.append((f"disc_sphere_homology[{R.spec}]", not bad, bad or None))
    return out


# -- lifting -----------------------------------------------------------------------

def suite_lifting(seed, ring=None):
    rng = random.Random(seed)
    rings = _rings(ring) if ring else [QQ, GF(2), WEYL1]
    out = []
    for R in rings:
        bad = []
        p = random_fibration(R, rng, max_deg=3)
        rep = rlp_suite(p, "J", 3, seed=rng.randrange(2**31), samples=20)
        if not (rep.passed and rep.consistent):
            bad.append("fibration vs J")
        p = random_trivial_fibration(R, rng, max_deg=3)
        rep = rlp_suite(p, "I", 3, seed=rng.randrange(2**31), samples=20)
        if not (rep.passed and rep.consistent):
            bad.append("trivial fibration vs I")
        p = random_nonfibration(R, rng, max_deg=3)
        rep = rlp_suite(p, "J", 3, seed=rng.randrange(2**31), samples=20)
        if rep.passed or not rep.consistent:
            bad.append("non-fibration lifts against J")
        out.append((f"rlp[{R.spec}]", not bad, bad or None))
        bad = []
        for _ in range(2):
            f = random_fibration(R, rng, max_deg=3) if rng.random() < 0.5 else random_nonfibration(R, rng, 3)
            i, q = factor_trivcof_fib(f)
            if not (classify(i).trivcof and classify(q).fib and i.then(q) == f):
                bad.append(f.label or "map")
        out.append((f"factorization[{R.spec}]", not bad, bad or None))
    return out


# -- dga ---------------------------------------------------------------------------

def suite_dga(seed, ring=None):
    rng = random.Random(seed)
    out = []
    for base in ("weyl1", "point"):
        A = random_presentation(rng, base, max_deg=3, per_degree=2)
        G = A.gens

        def rel(r):
            return random_element(G, r, max_len=2, terms=2, base=base)

        def comm(r):
            s, t = rel(r), rel(r)
            s, t = _homog(s), _homog(t)
            if s.is_zero() or t.is_zero():
                return None
            sign = -1 if (s.degree * t.degree) % 2 else 1
            return None if multiply(s, t) == multiply(t, s).scale(sign) else [s.format(), t.format()]

        def dsq(r):
            s = rel(r)
            return None if A.d(A.d(s)).is_zero() else [s.format()]

        def leib(r):
            s, t = _homog(rel(r)), _homog(rel(r))
            if s.is_zero():
                return None
            sign = -1 if s.degree % 2 else 1
            rhs = multiply(A.d(s), t) + multiply(s, A.d(t)).scale(sign)
            return None if A.d(multiply(s, t)) == rhs else [s.format(), t.format()]

        checks = [("graded_commutativity", comm), ("d_squared", dsq), ("leibniz", leib)]
        if base == "weyl1":
            def dleib(r):
                s, t = rel(r), rel(r)
                return None if act(D, multiply(s, t)) == multiply(act(D, s), t) + multiply(s, act(D, t)) \
                    else [s.format(), t.format()]

            def assoc(r):
                a, b, s = _rand_op(r), _rand_op(r), rel(r)
                return None if act(a * b, s) == act(a, act(b, s)) else [str(a), str(b), s.format()]

            checks += [("partial_derivation", dleib), ("action_associativity", assoc)]
        for name, fn in checks:
            ok, info = _first_fail(rng, 15, fn)
            out.append((f"{name}[{base}]", ok, info))
        ok, info = _first_fail(rng, 5, lambda r: _adjunction_roundtrip(r, base))
        out.append((f"adjunction[{base}]", ok, info))
        rep = compare_invariants_iso(G, 5, rng, base=base)
        out.append((f"invariant_product[{base}]", rep.passed, list(rep.failures[:1]) or None))
    ok, info = _first_fail(rng, 10, _sym_check)
    out.append(("symmetrization", ok, info))
    return out


def _homog(s: AlgElement) -> AlgElement:
    if s.is_zero():
        return s
    k = min(s.degrees())
    return AlgElement(s.gens, {w: c for w, c in s.terms.items() if _deg(s.gens, w) == k})


def _deg(gens, w):
    return sum(gens.degree(gens.name(g)) for g, _ in w)


def _adjunction_roundtrip(rng, base):
    m = random_module_map(rng, base)
    ext = adjunction_transpose("extend", m)
    if adjunction_transpose("restrict", ext) != m:
        return ["restrict(extend(m)) != m"]
    if adjunction_transpose("extend", adjunction_transpose("restrict", ext)) != ext:
        return ["extend(restrict(f)) != f"]
    return None


def _sym_check(rng):
    G = GenSet([("a", 1), ("b", 2), ("c", 1)])
    terms = {}
    for _ in range(3):
        n = rng.randint(1, 3)
        terms[tuple((rng.randrange(3), 0) for _ in range(n))] = rng.randint(-3, 3)
    T = TensorElement(G, terms)
    S = symmetrize(T)
    if symmetrize(S) != S:
        return ["not idempotent"]
    for n in sorted(T.lengths()):
        part = TensorElement(G, {w: c for w, c in S.terms.items() if len(w) == n})
        for sigma in itertools.permutations(range(n)):
            Tn = TensorElement(G, {w: c for w, c in T.terms.items() if len(w) == n})
            if symmetrize(Tn.permute(sigma)) != symmetrize(Tn) or part.permute(sigma) != part:
                return [f"sigma={sigma}"]
    return None


# -- sullivan ----------------------------------------------------------------------

def suite_sullivan(seed, ring=None):
    rng = random.Random(seed)
    out = []
    for base in ("weyl1", "point"):
        bad = []
        for _ in range(2):
            phi = random_dga_morphism(rng, base, max_deg=3, max_b=1 if base == "weyl1" else 0)
            res = factorize(phi, through_degree=3, words=2)
            bad += [k for k, v in res.verdicts.items() if not v.ok]
        out.append((f"factorize[{base}]", not bad, sorted(set(bad)) or None))
        u, v, phi, phi2 = random_commuting_square(rng, base, max_b=1 if base == "weyl1" else 0)
        rep = functorial_square(u, v, phi, phi2, rng=rng, samples=10)
        out.append((f"functorial_square[{base}]", rep.passed,
                    sorted(k for k, x in rep.verdicts.items() if not x.ok) or None))
    phi = random_dga_morphism(rng, "point", max_deg=3, max_b=0)
    phi = _positive(phi)
    res = factorize(phi, through_degree=3, words=2)
    table = acyclicity_probe(res.total, len(phi.source.gens), k_max=2, n_max=3)
    nz = sorted(f"{k},{m}" for (k, m), d in table.items() if d)
    out.append(("acyclicity_probe", not nz, nz or None))
    start, maps = random_algebra_chain(rng, "point", 2)
    rep = colim_enrichment_check(start, maps, through_degree=3)
    out.append(("colimit_enrichment", rep.ok, rep.mismatches or None))
    return out


def _positive(phi):
    """Drop degree-0 generators of the source (the probe needs none)."""
    A = phi.source
    if all(k >= 1 for _, k in A.gens):
        return phi
    keep = GenSet([(n, k) for n, k in A.gens if k >= 1])
    A2 = DGAPresentation(keep, {n: A.diff[n].reindex(keep) for n in keep.names}, A.base)
    return AlgebraMorphism(A2, phi.target, {n: phi.images[n] for n in keep.names})


# -- negative control --------------------------------------------------------------

def suite_tampered(seed, ring=None):
    """A relative algebra whose well-order is not lowering; must FAIL."""
    A = DGAPresentation(GenSet([("a", 1)]), {}, "point")
    T = GenSet([("a", 1), ("w", 3), ("u", 2)])
    total = DGAPresentation(T, {"w": AlgElement.gen(T, "u")}, "point")
    v = check_lowering(RSDA(A, GenSet([("w", 3), ("u", 2)]), total))
    return [("lowering", v.ok, {"witness": list(v.witness)} if v.witness else None)]


# -- fixtures ----------------------------------------------------------------------

# (name, argv relative to the fixture directory, expected exit, expected (path, value) pairs)
FIXTURE_CASES = [
    ("classify_zeta1", ["classify", "--map", "zeta1.map"], 0,
     [(("results", "classification", "trivcof"), True)]),
    ("classify_zeta1_Q", ["classify", "--map", "q_zeta1.map"], 0,
     [(("results", "classification", "trivcof"), True)]),
    ("classify_iota1", ["classify", "--map", "iota1.map"], 0,
     [(("results", "classification", "cof"), True), (("results", "classification", "weq"), False)]),
    ("classify_iota2", ["classify", "--map", "iota2.map"], 0,
     [(("results", "classification", "cof"), True), (("results", "classification", "weq"), False)]),
    ("homology_disc2", ["homology", "--complex", "disc2.cx", "--degree", "1"], 0,
     [(("results", "is_zero"), True)]),
    ("homology_torsion", ["homology", "--complex", "torsion.cx", "--degree", "0"], 0,
     [(("results", "is_zero"), False), (("results", "torsion"), ["d"])]),
    ("lift_exists", ["lift", "--square", "lift.sq"], 0, [(("results", "lift_found"), True)]),
    ("lift_missing", ["lift", "--square", "nolift.sq"], 1, [(("results", "lift_found"), False)]),
    ("lift_noncellular", ["lift", "--square", "noncell.sq"], 1,
     [(("checks", "operation"), False), (("error", "message"), "left edge is not a cellular inclusion in degree 0")]),
    ("factorize_unit", ["factorize", "--morphism", "unit.mor", "--gens", "unit.gens"], 0,
     [(("checks", "p_after_i_equals_phi"), True)]),
    ("factorize_weyl", ["factorize", "--morphism", "phi.mor", "--gens", "phi.gens"], 0,
     [(("checks", "homotopy"), True)]),
    ("factorize_point", ["factorize", "--morphism", "p_factor.mor", "--through-degree", "3"], 0,
     [(("checks", "acyclicity_probe"), True)]),
    ("colim_chain", ["colim", "--chain", "iota1.map", "id_disc1.map"], 0,
     [(("results", "colimit", "ranks"), {"0": 1, "1": 1})]),
    ("colim_algebra", ["colim", "--chain", "p01.mor", "p12.mor", "--through-degree", "3"], 0,
     [(("checks", "enrichment_commutes"), True)]),
    ("reject_d_squared", ["homology", "--complex", "bad_d2.cx", "--degree", "0"], 2,
     [(("error", "message"), "d^2 != 0: d_2 * d_1 is nonzero (degree 2)")]),
    ("reject_ring_token", ["homology", "--complex", "bad_ring.cx", "--degree", "0"], 2,
     [(("error", "line"), 1)]),
    ("reject_syntax", ["homology", "--complex", "bad_syntax.cx", "--degree", "0"], 2,
     [(("error", "line"), 6), (("error", "col"), 3)]),
]


def _dig(report, path):
    for k in path:
        report = report[k]
    return report


def suite_fixtures(seed, ring=None):
    from .cli import fixture_dir, run
    base = fixture_dir()
    out = []
    for name, argv, code, expect in FIXTURE_CASES:
        args = [a if not a.endswith((".cx", ".map", ".sq", ".mor", ".gens", ".alg")) else str(base / a)
                for a in argv]
        report, got = run(args)
        bad = None
        if got != code:
            bad = {"exit": got, "expected_exit": code}
        else:
            for path, want in expect:
                try:
                    have = _dig(report, path)
                except (KeyError, TypeError):
                    have = None
                if have != want:
                    bad = {"at": list(path), "got": have, "expected": want}
                    break
        out.append((name, bad is None, bad))
    return out


SUITE_FUNCS = {"ore": suite_ore, "chain": suite_chain, "lifting": suite_lifting, "dga": suite_dga,
               "sullivan": suite_sullivan, "fixtures": suite_fixtures, "tampered": suite_tampered}


def run_suite(name: str, seed: int, ring: str | None = None) -> list:
    """Run one suite; an unexpected exception becomes a single failing item."""
    try:
        items = SUITE_FUNCS[name](seed, ring)
    except Exception as e:  # noqa: BLE001 - reported, not swallowed
        items = [("internal_error", False, {"type": type(e).__name__, "message": str(e)})]
    return sorted(items, key=lambda t: t[0])
