"""Seeded constructions of complexes and maps with known classification.

Used by the test suite, the acceptance runner and ``verify``.  Everything is
built from a few shapes whose homology is known (spheres, discs, and over
Weyl1 the two-term complex with differential an operator), then disguised by
random unimodular changes of basis.
"""
from __future__ import annotations

import random

from .chain import ChainMap, FreeComplex, direct_sum, disc, sphere
from .linalg import OperatorMatrix
from .rings import CoeffRing, Weyl1

__all__ = [
    "random_unimodular",
    "conjugate",
    "random_complex",
    "random_acyclic",
    "projection",
    "inclusion",
    "random_fibration",
    "random_trivial_fibration",
    "random_nonfibration",
    "random_map_pair",
    "random_cycle",
    "random_dga_morphism",
    "enlarge",
    "random_commuting_square",
    "random_algebra_chain",
    "random_module_map",
]


def random_unimodular(R: CoeffRing, n: int, rng: random.Random, steps: int = 3):
    """(T, T^-1) as a product of elementary row operations."""
    T = [[R.one() if i == j else R.zero() for j in range(n)] for i in range(n)]
    Ti = [row[:] for row in T]
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        c = R.random_element(rng, 1)
        if R.is_zero(c):
            continue
        # T <- E T with E = 1 + c e_ij; inverse picks up (1 - c e_ij) on the right
        T[i] = [R.add(a, R.mul(c, b)) for a, b in zip(T[i], T[j])]
        for row in Ti:
            row[j] = R.sub(row[j], R.mul(row[i], c))
    mk = lambda rows: OperatorMatrix.from_rows(R, rows, n)
    return mk(T), mk(Ti)


def conjugate(C: FreeComplex, rng: random.Random, steps: int = 3):
    """A basis change C' of C with the isomorphism phi : C -> C' and its inverse."""
    R = C.ring
    T, Ti = {}, {}
    for n in range(C.top + 1):
        T[n], Ti[n] = random_unimodular(R, C.rank(n), rng, steps)
    diffs = {n: Ti[n] @ C.diff(n) @ T[n - 1] for n in range(1, C.top + 1)}
    C2 = FreeComplex(R, C.ranks, diffs)
    return C2, ChainMap(C, C2, T, "iso"), ChainMap(C2, C, Ti, "iso_inv")


def _elementary(R: CoeffRing, n: int, a) -> FreeComplex:
    return FreeComplex(R, {n: 1, n - 1: 1}, {n: OperatorMatrix.from_rows(R, [[a]], 1)})


def random_complex(R: CoeffRing, rng: random.Random, max_deg: int = 4, max_rank: int = 3,
                   pieces: int = 2) -> FreeComplex:
    """Direct sum of spheres, discs and (over Weyl1) torsion pieces, in disguise."""
    parts = []
    budget = {n: max_rank for n in range(max_deg + 1)}
    for _ in range(pieces):
        kind = rng.choice(["sphere", "disc", "torsion"] if isinstance(R, Weyl1) else ["sphere", "disc"])
        n = rng.randint(0 if kind == "sphere" else 1, max_deg)
        need = [n] if kind == "sphere" else [n, n - 1]
        if any(budget[m] < 1 for m in need):
            continue
        for m in need:
            budget[m] -= 1
        if kind == "sphere":
            parts.append(sphere(n, R))
        elif kind == "disc":
            parts.append(disc(n, R))
        else:
            a = R.random_element(rng, 2)
            parts.append(_elementary(R, n, a if not R.is_zero(a) else R.one()))
    if not parts:
        return FreeComplex(R, {})
    return conjugate(direct_sum(*parts), rng)[0]


def random_acyclic(R: CoeffRing, rng: random.Random, max_deg: int = 4, budget: dict | None = None):
    budget = dict(budget or {n: 1 for n in range(max_deg + 1)})
    parts = []
    for n in rng.sample(range(1, max_deg + 1), k=max_deg):
        if budget.get(n, 0) >= 1 and budget.get(n - 1, 0) >= 1 and rng.random() < 0.6:
            budget[n] -= 1
            budget[n - 1] -= 1
            parts.append(disc(n, R))
    if not parts:
        return FreeComplex(R, {})
    return conjugate(direct_sum(*parts), rng)[0]


def projection(X: FreeComplex, K: FreeComplex) -> ChainMap:
    """X + K -> X."""
    S = direct_sum(X, K)
    R = X.ring
    comps = {n: OperatorMatrix.identity(R, X.rank(n)).vstack(OperatorMatrix.zero(R, K.rank(n), X.rank(n)))
             for n in range(S.top + 1)}
    return ChainMap(S, X, comps, "proj")


def inclusion(X: FreeComplex, K: FreeComplex) -> ChainMap:
    """X -> X + K."""
    S = direct_sum(X, K)
    R = X.ring
    comps = {n: OperatorMatrix.identity(R, X.rank(n)).hstack(OperatorMatrix.zero(R, X.rank(n), K.rank(n)))
             for n in range(S.top + 1)}
    return ChainMap(X, S, comps, "incl")


def _disguise(f: ChainMap, rng: random.Random) -> ChainMap:
    _, _, src_inv = conjugate(f.source, rng)
    _, tgt_iso, _ = conjugate(f.target, rng)
    return src_inv.then(f).then(tgt_iso)


def random_fibration(R: CoeffRing, rng: random.Random, max_deg: int = 4, max_rank: int = 3) -> ChainMap:
    """Projection Y + K -> Y in disguise; K arbitrary."""
    Y = random_complex(R, rng, max_deg, max(1, max_rank - 1), pieces=2)
    left = {n: max_rank - Y.rank(n) for n in range(max_deg + 1)}
    K = _fit(random_complex(R, rng, max_deg, 1, pieces=2), left)
    return _disguise(projection(Y, K), rng)


def random_trivial_fibration(R: CoeffRing, rng: random.Random, max_deg: int = 4,
                             max_rank: int = 3) -> ChainMap:
    Y = random_complex(R, rng, max_deg, max(1, max_rank - 1), pieces=2)
    left = {n: max_rank - Y.rank(n) for n in range(max_deg + 1)}
    K = random_acyclic(R, rng, max_deg, left)
    return _disguise(projection(Y, K), rng)


def random_nonfibration(R: CoeffRing, rng: random.Random, max_deg: int = 4, max_rank: int = 3) -> ChainMap:
    """Y -> Y + S^n with n >= 1: misses the sphere cell in degree n."""
    for _ in range(100):
        Y = random_complex(R, rng, max_deg, max(1, max_rank - 1), pieces=2)
        free = [n for n in range(1, max_deg + 1) if Y.rank(n) < max_rank]
        if free:
            break
    n = rng.choice(free)
    return _disguise(inclusion(Y, sphere(n, R)), rng)


def _fit(K: FreeComplex, budget: dict) -> FreeComplex:
    if all(K.rank(n) <= budget.get(n, 0) for n in K.ranks):
        return K
    return FreeComplex(K.ring, {})


def _random_piece(R: CoeffRing, rng: random.Random, max_deg: int) -> FreeComplex:
    kind = rng.choice(["sphere", "disc", "torsion"] if isinstance(R, Weyl1) else ["sphere", "disc"])
    n = rng.randint(0 if kind == "sphere" else 1, max_deg)
    if kind == "sphere":
        return sphere(n, R)
    if kind == "disc":
        return disc(n, R)
    a = R.random_element(rng, 2)
    return _elementary(R, n, a if not R.is_zero(a) else R.one())


def random_map_pair(R: CoeffRing, rng: random.Random, max_deg: int = 3, max_rank: int = 3):
    """Composable (f, g) built from inclusions, projections, identities and zero maps.

    The complexes are kept as explicit sums of pieces so that every step
    knows its summands; the pair is disguised by basis changes at the end.
    """

    def total(parts):
        return direct_sum(*parts) if parts else FreeComplex(R, {})

    def fits(parts):
        C = total(parts)
        return all(r <= max_rank for r in C.ranks.values())

    def step(parts):
        X = total(parts)
        kind = rng.choice(["incl", "incl", "proj", "proj", "id", "zero"])
        if kind == "incl":
            piece = _random_piece(R, rng, max_deg)
            if fits(parts + [piece]):
                return inclusion(X, piece) if parts else ChainMap.zero(X, piece), parts + [piece]
        if kind == "proj" and parts:
            head = parts[:-1]
            return projection(total(head), parts[-1]) if head else ChainMap.zero(X, FreeComplex(R, {})), head
        if kind == "zero":
            new = [_random_piece(R, rng, max_deg)]
            return ChainMap.zero(X, total(new)), new
        return ChainMap.identity(X), parts

    parts = [_random_piece(R, rng, max_deg) for _ in range(rng.randint(0, 2))]
    while not fits(parts):
        parts.pop()
    f, mid = step(parts)
    g, _ = step(mid)
    _, _, a_inv = conjugate(f.source, rng)
    _, b, b_inv = conjugate(f.target, rng)
    _, c, _ = conjugate(g.target, rng)
    return a_inv.then(f).then(b), b_inv.then(g).then(c)


# -- algebra-level constructions ----------------------------------------------------

def random_cycle(pres, degree: int, rng: random.Random, max_b: int = 1):
    """A cycle of the given degree: a boundary plus a product of closed generators."""
    from .dga import AlgElement, multiply, random_element

    G = pres.gens
    out = AlgElement.zero(G)
    s = random_element(G, rng, max_len=2, terms=2, base=pres.base, degree=degree + 1, max_b=max_b)
    out = out + pres.d(s)
    closed = [n for n, k in G if pres.diff[n].is_zero() and 0 < k <= degree]
    if closed and rng.random() < 0.7:
        for _ in range(10):
            fs, deg = [], 0
            while deg < degree:
                opts = [n for n in closed if G.degree(n) <= degree - deg]
                if not opts:
                    break
                n = rng.choice(opts)
                fs.append(n)
                deg += G.degree(n)
            if deg == degree:
                term = AlgElement.one(G)
                for n in fs:
                    term = multiply(term, pres.gen(n))
                out = out + term.scale(rng.choice([1, -1, 2]))
                break
    return out


def random_dga_morphism(rng: random.Random, base: str = "weyl1", max_deg: int = 4,
                        per_degree: int = 2, max_b: int = 1):
    """phi : A -> B with B = (extra generators) + (copies of A's generators).

    phi(a) = c_a + z_a with z_a a cycle among the extra generators, and
    d(c_a) = phi(d a); closed generators are sometimes sent to z_a alone.
    """
    from .dga import AlgebraMorphism, AlgElement, DGAPresentation, GenSet, random_presentation

    A = random_presentation(rng, base, min(max_deg, 3), per_degree, names="a", max_b=max_b)
    E = random_presentation(rng, base, max_deg, per_degree, names="e", max_b=max_b)
    copies = []
    for n, k in A.gens:
        if A.diff[n].is_zero() and rng.random() < 0.3:
            continue
        copies.append((f"c_{n}", k))
    BG = GenSet(E.gens.gens + tuple(copies))
    diffs = {n: E.diff[n].reindex(BG) for n in E.gens.names}
    images: dict = {n: AlgElement.zero(BG) for n in A.gens.names}
    partial_B = DGAPresentation(BG, diffs, base)
    for n, k in A.gens:
        z = random_cycle(E, k, rng, max_b).reindex(BG) if rng.random() < 0.6 else AlgElement.zero(BG)
        if f"c_{n}" in BG:
            partial = AlgebraMorphism(A, partial_B, images, check=False)
            diffs[f"c_{n}"] = partial(A.diff[n])
            images[n] = AlgElement.gen(BG, f"c_{n}") + z
            partial_B = DGAPresentation(BG, diffs, base)
        else:
            images[n] = z
    B = DGAPresentation(BG, diffs, base)
    return AlgebraMorphism(A, B, images)


def enlarge(B, rng: random.Random, extra: int = 2, prefix: str = "f", max_b: int = 1):
    """B -> B' adding generators after B's own (closed, or bounding a cycle)."""
    from .dga import AlgebraMorphism, DGAPresentation, GenSet

    new = [(f"{prefix}{k}", rng.randint(1, 3)) for k in range(extra)]
    G2 = GenSet(B.gens.gens + tuple(new))
    diffs = {n: B.diff[n].reindex(G2) for n in B.gens.names}
    for j, (n, k) in enumerate(new):
        if k >= 2 and rng.random() < 0.6:
            # only generators before n: a later one may still acquire a differential
            Gj = GenSet(B.gens.gens + tuple(new[:j]))
            Bj = DGAPresentation(Gj, {m: _restrict(diffs[m], Gj) for m in Gj.names if m in diffs}, B.base)
            diffs[n] = random_cycle(Bj, k - 1, rng, max_b).reindex(G2)
    B2 = DGAPresentation(G2, diffs, B.base)
    inc = AlgebraMorphism(B, B2, {n: B2.gen(n) for n in B.gens.names})
    return B2, inc


def _restrict(e, G):
    """Re-express ``e`` over the smaller generator set ``G`` (all used generators must be in G)."""
    from .dga import AlgElement

    out = AlgElement.zero(G)
    for w, c in e.terms.items():
        out = out + AlgElement.from_factors(G, [(G.index(e.gens.name(g)), b) for g, b in w], c)
    return out


def random_commuting_square(rng: random.Random, base: str = "weyl1", max_b: int = 1):
    """(u, v, phi, phi2) with phi2 o u = v o phi and v sending generators to generators.

    u and v are inclusions into enlargements; the new generators of A2 are
    closed and go to cycles of B2.
    """
    from .dga import AlgebraMorphism, DGAPresentation, GenSet

    phi = random_dga_morphism(rng, base, max_deg=3, max_b=max_b)
    A, B = phi.source, phi.target
    B2, v = enlarge(B, rng, rng.randint(0, 2), "f", max_b)
    new = [(f"g{k}", rng.randint(1, 3)) for k in range(rng.randint(0, 1))]
    G2 = GenSet(A.gens.gens + tuple(new))
    A2 = DGAPresentation(G2, {n: A.diff[n].reindex(G2) for n in A.gens.names}, base)
    u = AlgebraMorphism(A, A2, {n: A2.gen(n) for n in A.gens.names})
    images = {n: v(phi.images[n]) for n in A.gens.names}
    for n, k in new:
        images[n] = random_cycle(B2, k, rng, max_b)
    phi2 = AlgebraMorphism(A2, B2, images)
    return u, v, phi, phi2


def random_algebra_chain(rng: random.Random, base: str = "point", length: int = 2):
    """A_0 -> A_1 -> ... by enlargements and identities, all differentials of weight 0."""
    from .dga import AlgebraMorphism, random_presentation

    A = random_presentation(rng, base, 3, 1, names="a", max_b=0)
    start, maps = A, []
    for j in range(length):
        if rng.random() < 0.3:
            maps.append(AlgebraMorphism.identity(A))
        else:
            A, inc = enlarge(A, rng, rng.randint(1, 2), f"n{j}_", max_b=0)
            maps.append(inc)
    return start, maps


def random_module_map(rng: random.Random, base: str = "weyl1"):
    """A module map M -> For(B) that commutes with d by construction.

    M has pairs (m, m') with d m' = a.m; sending m to d t and m' to a.t
    commutes because d is D-linear.  Closed generators go to cycles.
    """
    from .dga import AlgElement, FreeDGModule, GenSet, ModuleMap, act, random_element, random_presentation
    from .ore import OreOperator
    from .rings import WEYL1

    B = random_presentation(rng, base, max_deg=3, per_degree=2, names="b")
    gl, diff_spec, images = [], {}, {}
    for k in range(rng.randint(1, 2)):
        deg = rng.randint(1, 2)
        t = random_element(B.gens, rng, max_len=2, terms=2, base=base, degree=deg + 1)
        a = WEYL1.random_element(rng) if base == "weyl1" else OreOperator.coerce(rng.choice([-2, -1, 1, 3]))
        gl += [(f"m{k}", deg), (f"n{k}", deg + 1)]
        diff_spec[f"n{k}"] = (a, f"m{k}")
        images[f"m{k}"], images[f"n{k}"] = B.d(t), act(a, t)
    for k in range(rng.randint(0, 2)):
        deg = rng.randint(1, 3)
        gl.append((f"z{k}", deg))
        images[f"z{k}"] = random_cycle(B, deg, rng, max_b=1 if base == "weyl1" else 0)
    G = GenSet(gl)
    M = FreeDGModule(G, {n: act(a, AlgElement.gen(G, m)) for n, (a, m) in diff_spec.items()}, base)
    return ModuleMap(M, B, images)
