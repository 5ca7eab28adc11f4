"""Relative Sullivan algebras and the factorization phi = p o i through A (x) S(P).

For a morphism phi : A -> B and a finite family of homogeneous elements b of B
in positive degrees, P is the sum of one disc per b:

    d(sI_b) = 0,  d(I_b) = sI_b,   eps(I_b) = b,  eps(sI_b) = d_B(b),

with deg sI_b = deg b - 1.  The combined algebra has generators A then P
(in block order), i is the identity on A and p is phi on A and eps on P.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .chain import ChainMap, FreeComplex, colim_sequential
from .dga import (
    AlgebraMorphism,
    AlgElement,
    DGAError,
    DGAPresentation,
    GenSet,
    MorphismError,
    act,
    random_element,
)
from .linalg import OperatorMatrix, rank, solve, sparse_rank
from .ore import OreOperator, RationalFunction
from .rings import QQ, QX, CoeffRing, PrimeField

__all__ = [
    "Verdict",
    "PData",
    "RSDA",
    "FactorizationResult",
    "well_order",
    "build_P",
    "factorize",
    "check_lowering",
    "check_minimal",
    "contracting_homotopy_check",
    "enumerate_words",
    "acyclicity_probe",
    "functorial_square",
    "colim_enrichment_check",
    "truncate",
]


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def well_order(items: Sequence[tuple[str, int]], prefix: str = "I_") -> GenSet:
    """Block order: all sI of degree-1 b's, then their I's, then degree 2, and so on."""
    by_deg: dict = {}
    for label, deg in items:
        by_deg.setdefault(deg, []).append(label)
    out = []
    for deg in sorted(by_deg):
        out += [(f"s{prefix}{lab}", deg - 1) for lab in by_deg[deg]]
        out += [(f"{prefix}{lab}", deg) for lab in by_deg[deg]]
    return GenSet(out)


def _label_of(b: AlgElement, k: int) -> str:
    if len(b.terms) == 1:
        (w, c), = b.terms.items()
        if len(w) == 1 and w[0][1] == 0 and c == 1:
            return b.gens.name(w[0][0])
    return f"b{k}"


@dataclass
class PData:
    B: DGAPresentation
    labels: tuple
    elements: dict  # label -> element of B
    gens: GenSet
    pres: DGAPresentation  # S(P) with d_P
    eps: AlgebraMorphism  # S(P) -> B
    h: dict  # P generator -> module element of S(P)
    prefix: str = "I_"

    def top(self, label: str) -> str:
        return f"{self.prefix}{label}"

    def bottom(self, label: str) -> str:
        return f"s{self.prefix}{label}"


def build_P(B: DGAPresentation, gens: Sequence, prefix: str = "I_") -> PData:
    """One disc per element of ``gens``; entries are elements or (label, element) pairs."""
    items, elements = [], {}
    for k, g in enumerate(gens):
        label, b = g if isinstance(g, tuple) else (_label_of(g, k), g)
        if b.gens != B.gens:
            raise DGAError(f"generator {label!r} is not an element of B")
        if b.is_zero() or not b.is_homogeneous():
            raise DGAError(f"generator {label!r} must be nonzero and homogeneous")
        deg = b.degree
        if deg < 1:
            raise DGAError(f"generator {label!r} has degree {deg}; positive degree needed")
        if label in elements:
            raise DGAError(f"duplicate generator label {label!r}")
        elements[label] = b
        items.append((label, deg))
    G = well_order(items, prefix)
    diff = {}
    for label, _ in items:
        diff[f"{prefix}{label}"] = AlgElement.gen(G, f"s{prefix}{label}")
    pres = DGAPresentation(G, diff, B.base)
    images = {}
    for label, _ in items:
        b = elements[label]
        images[f"{prefix}{label}"] = b
        images[f"s{prefix}{label}"] = B.d(b)
    eps = AlgebraMorphism(pres, B, images)
    h = {}
    for label, _ in items:
        h[f"s{prefix}{label}"] = AlgElement.gen(G, f"{prefix}{label}")
        h[f"{prefix}{label}"] = AlgElement.zero(G)
    return PData(B, tuple(l for l, _ in items), elements, G, pres, eps, h, prefix)


def _h_apply(P: PData, m: AlgElement) -> AlgElement:
    out = AlgElement.zero(P.gens)
    for w, c in m.terms.items():
        if len(w) != 1:
            raise DGAError("homotopy is defined on module elements of P")
        (g, b), = w
        out = out + act(OreOperator({b: c}), P.h[P.gens.name(g)])
    return out


def contracting_homotopy_check(P: PData, rng: random.Random | None = None, spot: int = 5) -> Verdict:
    """d h + h d = id on every generator of P and on a few operator multiples."""
    d = P.pres.d
    probes = [P.pres.gen(n) for n in P.gens.names]
    if P.pres.base == "weyl1" and probes:
        rng = rng or random.Random(0)
        for _ in range(spot):
            g = rng.choice(probes)
            op = OreOperator({i: RationalFunction.coerce(rng.randint(-2, 2)) + i for i in range(rng.randint(0, 2) + 1)})
            probes.append(act(op, g))
    for m in probes:
        lhs = d(_h_apply(P, m)) + _h_apply(P, d(m))
        if lhs != m:
            return Verdict(False, (m.format(), lhs.format()))
    return Verdict(True)


class RSDA:
    """A -> A (x) S(V): ``total`` has the base generators first, then V."""

    def __init__(self, base: DGAPresentation, V: GenSet, total: DGAPresentation):
        if total.gens.gens[:len(base.gens)] != base.gens.gens or total.gens.gens[len(base.gens):] != V.gens:
            raise DGAError("total generators must be the base generators followed by V")
        self.base, self.V, self.total = base, V, total

    def check_base(self) -> Verdict:
        for n in self.base.gens.names:
            if self.total.diff[n] != self.base.diff[n].reindex(self.total.gens):
                return Verdict(False, (n,))
        return Verdict(True)

    def _v_range(self):
        a = len(self.base.gens)
        return range(a, a + len(self.V))

    @property
    def split(self) -> bool:
        a = len(self.base.gens)
        return all(g >= a for i in self._v_range()
                   for g in self.total.diff[self.total.gens.name(i)].generators_used())

    @property
    def minimal(self) -> bool:
        return check_minimal(self).ok


def check_lowering(r: RSDA) -> Verdict:
    """Every generator occurring in d(v) must precede v; witness (v, offender)."""
    G = r.total.gens
    for i in r._v_range():
        used = r.total.diff[G.name(i)].generators_used()
        late = sorted(g for g in used if g >= i)
        if late:
            return Verdict(False, (G.name(i), G.name(late[0])))
    return Verdict(True)


def check_minimal(r: RSDA) -> Verdict:
    """Degree never decreases along the well-order of V; witness the first drop."""
    gens = r.V.gens
    for (n1, k1), (n2, k2) in zip(gens, gens[1:]):
        if k1 > k2:
            return Verdict(False, (n1, n2))
    return Verdict(True)


# -- word enumeration ------------------------------------------------------------

def enumerate_words(gens: GenSet, degree: int, max_len: int, max_b: int = 0,
                    allowed: Sequence[int] | None = None) -> list:
    """Canonical words of the given degree with at most ``max_len`` factors."""
    idx = list(range(len(gens))) if allowed is None else sorted(allowed)
    factors = [(g, b) for g in idx for b in range(max_b + 1)]
    out = []

    def rec(start, deg, cur):
        if deg == degree:
            out.append(tuple(cur))
        if len(cur) == max_len:
            return
        for k in range(start, len(factors)):
            g, b = factors[k]
            gd = gens.gens[g][1]
            if deg + gd > degree:
                continue
            cur.append((g, b))
            rec(k + 1 if gd % 2 else k, deg + gd, cur)
            cur.pop()

    rec(0, 0, [])
    return sorted(set(out))


# -- factorization ------------------------------------------------------------------

@dataclass
class FactorizationResult:
    A: DGAPresentation
    B: DGAPresentation
    phi: AlgebraMorphism
    P: PData
    total: DGAPresentation
    i: AlgebraMorphism
    p: AlgebraMorphism
    rsda: RSDA
    verdicts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    assumptions: list = field(default_factory=list)

    @property
    def P_gens(self) -> GenSet:
        return self.P.gens

    @property
    def h(self) -> dict:
        return self.P.h

    @property
    def well_order(self) -> tuple:
        return self.P.gens.names

    @property
    def passed(self) -> bool:
        return all(v.ok for v in self.verdicts.values())

    def to_dict(self) -> dict:
        T = self.total
        return {
            "combined": {
                "base": T.base,
                "generators": [[n, k] for n, k in T.gens],
                "differential": {n: T.diff[n].format() for n in T.gens.names},
            },
            "i": {n: e.format() for n, e in self.i.images.items()},
            "p": {n: e.format() for n, e in self.p.images.items()},
            "homotopy": {n: e.format() for n, e in self.P.h.items()},
            "well_order": list(self.well_order),
            "verdicts": {k: {"ok": v.ok, "witness": _jsonable(v.witness)} for k, v in self.verdicts.items()},
            "surjectivity_witnesses": self.witnesses,
            "assumptions": list(self.assumptions),
        }


def _jsonable(w):
    if w is None:
        return None
    if isinstance(w, (list, tuple)):
        return [_jsonable(x) for x in w]
    if isinstance(w, (str, int, bool)):
        return w
    return str(w)


def _fresh_prefix(names) -> str:
    prefix = "I_"
    while any(n.startswith(prefix) or n.startswith("s" + prefix) for n in names):
        prefix = "I" + prefix
    return prefix


def factorize(phi: AlgebraMorphism, gens: Sequence | None = None, through_degree: int = 4,
              words: int = 3, max_b: int = 1) -> FactorizationResult:
    """phi = p o i with i : A -> A (x) S(P) and p = mu o (phi (x) eps)."""
    A, B = phi.source, phi.target
    if A.base != B.base:
        raise DGAError("source and target over different bases")
    if not A.validated or not B.validated:
        raise DGAError("presentations must be validated")
    if gens is None:
        gens = [B.gen(n) for n, k in B.gens if k >= 1]
    P = build_P(B, gens, _fresh_prefix(A.gens.names))
    TG = A.gens.concat(P.gens)
    diff = {n: A.diff[n].reindex(TG) for n in A.gens.names}
    diff.update({n: P.pres.diff[n].reindex(TG) for n in P.gens.names})
    T = DGAPresentation(TG, diff, A.base)  # validates d_1^2 = 0 on generators
    i = AlgebraMorphism(A, T, {n: T.gen(n) for n in A.gens.names})
    p_img = dict(phi.images)
    p_img.update(P.eps.images)
    p = AlgebraMorphism(T, B, p_img)
    rsda = RSDA(A, P.gens, T)
    res = FactorizationResult(A, B, phi, P, T, i, p, rsda)
    pi = i.then(p)
    bad = [n for n in A.gens.names if pi.images[n] != phi.images[n]]
    res.verdicts["p_after_i_equals_phi"] = Verdict(not bad, tuple(bad) or None)
    res.verdicts["base_is_subalgebra"] = rsda.check_base()
    res.verdicts["lowering"] = check_lowering(rsda)
    res.verdicts["minimal"] = check_minimal(rsda)
    res.verdicts["split"] = Verdict(rsda.split)
    res.verdicts["homotopy"] = contracting_homotopy_check(P)
    res.verdicts["i_injective_on_probes"] = _injective_probe(i, A, through_degree, words)
    surj, wit = surjectivity_witnesses(p, through_degree, words, max_b if B.base == "weyl1" else 0)
    res.verdicts["p_surjective_on_probes"] = surj
    res.witnesses = wit
    res.assumptions.append(
        f"generation of B in positive degrees is checked on words of length <= {words}, "
        f"degree <= {through_degree}" + (f", derivative order <= {max_b}" if B.base == "weyl1" else ""))
    return res


def _injective_probe(i: AlgebraMorphism, A: DGAPresentation, N: int, K: int) -> Verdict:
    # i renames generators, so distinct words go to distinct words
    for n in range(N + 1):
        for w in enumerate_words(A.gens, n, K):
            e = AlgElement(A.gens, {w: 1})
            img = i(e)
            if len(img.terms) != 1:
                return Verdict(False, (e.format(),))
    return Verdict(True)


def surjectivity_witnesses(p: AlgebraMorphism, N: int, K: int, max_b: int):
    """Preimages under p for every word of B of degree 1..N (length <= K)."""
    T, B = p.source, p.target
    direct: dict = {}
    for n in T.gens.names:
        img = p.images[n]
        if len(img.terms) == 1:
            (w, c), = img.terms.items()
            if len(w) == 1 and w[0][1] == 0 and c == 1:
                direct.setdefault(w[0][0], n)
    table: dict = {}
    failures = []
    for deg in range(1, N + 1):
        for w in enumerate_words(B.gens, deg, K, max_b):
            y = AlgElement(B.gens, {w: 1})
            z = _factor_preimage(T, direct, w)
            if z is None or p(z) != y:
                z = _linear_preimage(p, y, deg, K, max_b)
            if z is None:
                failures.append(y.format())
            else:
                table[y.format()] = z.format()
    return Verdict(not failures, tuple(failures[:5]) or None), dict(sorted(table.items()))


def _factor_preimage(T: DGAPresentation, direct: dict, w: tuple):
    z = T.one()
    for g, b in w:
        name = direct.get(g)
        if name is None:
            return None
        z = z * AlgElement.gen(T.gens, name, b)
    return z


def _linear_preimage(p: AlgebraMorphism, y: AlgElement, deg: int, K: int, max_b: int):
    T = p.source
    cands = enumerate_words(T.gens, deg, K, max_b)[:400]
    if not cands:
        return None
    imgs = [p(AlgElement(T.gens, {w: 1})) for w in cands]
    cols = sorted({w for e in imgs for w in e.terms} | set(y.terms))
    col = {w: j for j, w in enumerate(cols)}
    rows = []
    for e in imgs:
        r = [RationalFunction.coerce(0)] * len(cols)
        for w, c in e.terms.items():
            r[col[w]] = c
        rows.append(r)
    rhs = [RationalFunction.coerce(0)] * len(cols)
    for w, c in y.terms.items():
        rhs[col[w]] = c
    v = solve(OperatorMatrix(QX, len(rows), len(cols), rows), rhs)
    if v is None:
        return None
    z = AlgElement.zero(T.gens)
    for w, c in zip(cands, v):
        if not c.is_zero():
            z = z + AlgElement(T.gens, {w: c})
    return z


# -- acyclicity probe ---------------------------------------------------------------

def acyclicity_probe(total: DGAPresentation, n_base: int, k_max: int, n_max: int,
                     field: CoeffRing = QQ, k_min: int = 1) -> dict:
    """dim H_m(A (x) S^k P) for k_min <= k <= k_max and 0 <= m <= n_max.

    ``total`` has the ``n_base`` generators of A first, then P.  Only
    available over the point base: the pieces are then finite-dimensional
    vector spaces.  Returns {(k, m): dimension}.
    """
    if total.base != "point":
        raise DGAError("acyclicity probe needs a field instance (point base)")
    if not field.is_field or field.spec == "Q(x)":
        raise DGAError("acyclicity probe needs Q or a prime field")
    if isinstance(field, PrimeField) and field.p <= k_max:
        raise DGAError(f"prime {field.p} must exceed the word length {k_max}")
    G = total.gens
    A_idx = list(range(n_base))
    P_idx = list(range(n_base, len(G)))
    if any(G.gens[g][1] == 0 for g in A_idx):
        raise DGAError("A must have no degree-0 generators for the probe")
    table: dict = {}
    if not P_idx:
        return table
    for k in range(k_min, k_max + 1):
        basis = {m: _split_words(G, A_idx, P_idx, k, m) for m in range(n_max + 2)}
        ranks = {0: 0}
        for m in range(1, n_max + 2):
            col = {w: j for j, w in enumerate(basis[m - 1])}
            rows = []
            for w in basis[m]:
                dw = total.d(AlgElement(G, {w: 1}))
                row = {}
                for v, c in dw.terms.items():
                    if v not in col:
                        raise DGAError("differential leaves the word-length piece (not split)")
                    row[col[v]] = field.coerce(c.constant)
                rows.append(row)
            ranks[m] = _rank(rows, len(basis[m - 1]), field)
        for m in range(n_max + 1):
            table[(k, m)] = len(basis[m]) - ranks[m] - ranks[m + 1]
    return table


def _rank(rows: list, ncols: int, field: CoeffRing) -> int:
    if isinstance(field, PrimeField):
        if not rows or not ncols:
            return 0
        dense = [[r.get(j, 0) for j in range(ncols)] for r in rows]
        return rank(OperatorMatrix(field, len(rows), ncols, dense))
    return sparse_rank(rows, field)


def _split_words(G: GenSet, A_idx, P_idx, k: int, m: int) -> list:
    out = []
    for pw in _multisets(G, P_idx, k):
        dp = sum(G.gens[g][1] for g, _ in pw)
        if dp > m:
            continue
        for aw in enumerate_words(G, m - dp, m, 0, A_idx):
            out.append(tuple(sorted(aw + pw)))
    return sorted(set(out))


def _multisets(G: GenSet, idx, k: int):
    for combo in itertools.combinations_with_replacement(idx, k):
        if any(a == b and G.gens[a][1] % 2 for a, b in zip(combo, combo[1:])):
            continue
        yield tuple((g, 0) for g in combo)


# -- functoriality ---------------------------------------------------------------------

@dataclass
class FunctorialReport:
    w: AlgebraMorphism | None
    verdicts: dict

    @property
    def passed(self) -> bool:
        return all(v.ok for v in self.verdicts.values())


def functorial_square(u: AlgebraMorphism, v: AlgebraMorphism, phi: AlgebraMorphism,
                      phi2: AlgebraMorphism, gens=None, gens2=None, rng: random.Random | None = None,
                      samples: int = 50, F=None, F2=None) -> FunctorialReport:
    """w = u (x) v~ between the two factorizations, with both squares checked."""
    rng = rng or random.Random(0)
    if u.then(phi2).images != phi.then(v).images:
        raise MorphismError("input square does not commute")
    F = F or factorize(phi, gens)
    F2 = F2 or factorize(phi2, gens2)
    T, T2 = F.total, F2.total
    by_elem = {}
    for lab in F2.P.labels:
        by_elem.setdefault(F2.P.elements[lab], lab)
    images = {n: u.images[n].reindex(T2.gens) for n in F.A.gens.names}
    for lab in F.P.labels:
        vb = v(F.P.elements[lab])
        lab2 = by_elem.get(vb)
        if lab2 is None:
            raise MorphismError(f"v({lab}) = {vb.format()} is not in the target generating family", lab)
        images[F.P.top(lab)] = T2.gen(F2.P.top(lab2))
        images[F.P.bottom(lab)] = T2.gen(F2.P.bottom(lab2))
    w = AlgebraMorphism(T, T2, images)
    verdicts = {}
    left = [n for n in F.A.gens.names if F.i.then(w).images[n] != u.then(F2.i).images[n]]
    right = [n for n in T.gens.names if w.then(F2.p).images[n] != F.p.then(v).images[n]]
    verdicts["left_square_generators"] = Verdict(not left, tuple(left) or None)
    verdicts["right_square_generators"] = Verdict(not right, tuple(right) or None)
    comrel = [n for n in F.P.gens.names
              if v(F.P.eps.images[n]) != F2.p(w(T.gen(n)))]
    verdicts["comrel"] = Verdict(not comrel, tuple(comrel) or None)
    bad_l = bad_r = None
    for _ in range(samples):
        a = random_element(F.A.gens, rng, max_len=2, terms=2, base=F.A.base)
        if w(F.i(a)) != F2.i(u(a)):
            bad_l = a.format()
            break
    for _ in range(samples):
        t = random_element(T.gens, rng, max_len=2, terms=2, base=T.base)
        if F2.p(w(t)) != v(F.p(t)):
            bad_r = t.format()
            break
    verdicts["left_square_samples"] = Verdict(bad_l is None, (bad_l,) if bad_l else None)
    verdicts["right_square_samples"] = Verdict(bad_r is None, (bad_r,) if bad_r else None)
    return FunctorialReport(w, verdicts)


# -- colimits and enrichment ----------------------------------------------------------------

def truncate(A: DGAPresentation, N: int, weight: int = 1) -> tuple[FreeComplex, dict]:
    """Words of degree <= N (and derivative order <= weight over weyl1) as a complex.

    Over weyl1 this is a complex of Q(x)-vector spaces; it is closed under d
    only when every d(g) has weight 0, which is checked.
    """
    G = A.gens
    if any(k == 0 for _, k in G):
        raise DGAError("truncation needs generators of positive degree")
    W = weight if A.base == "weyl1" else 0
    if W and any(A.diff[n].weight() > 0 for n in G.names):
        raise DGAError("differential raises derivative order; weight truncation is not a subcomplex")
    R = QX if A.base == "weyl1" else QQ
    basis = {m: [w for w in enumerate_words(G, m, m if m else 0, W) if sum(b for _, b in w) <= W]
             for m in range(N + 1)}
    ranks = {m: len(basis[m]) for m in basis}
    diffs = {}
    for m in range(1, N + 1):
        col = {w: j for j, w in enumerate(basis[m - 1])}
        rows = []
        for w in basis[m]:
            r = [R.zero()] * len(col)
            for v, c in A.d(AlgElement(G, {w: 1})).terms.items():
                r[col[v]] = R.coerce(c) if R is QX else c.constant
            rows.append(r)
        diffs[m] = OperatorMatrix.from_rows(R, rows, len(col))
    return FreeComplex(R, ranks, diffs), basis


def _truncate_map(f: AlgebraMorphism, src: tuple, tgt: tuple, N: int) -> ChainMap:
    (S, sb), (T, tb) = src, tgt
    if any(e.weight() > 0 for e in f.images.values()) and f.source.base == "weyl1":
        raise DGAError("morphism raises derivative order; weight truncation is not preserved")
    R = S.ring
    comps = {}
    for m in range(N + 1):
        col = {w: j for j, w in enumerate(tb[m])}
        rows = []
        for w in sb[m]:
            r = [R.zero()] * len(col)
            for v, c in f(AlgElement(f.source.gens, {w: 1})).terms.items():
                r[col[v]] = R.coerce(c) if R is QX else c.constant
            rows.append(r)
        comps[m] = OperatorMatrix.from_rows(R, rows, len(col))
    return ChainMap(S, T, comps)


@dataclass
class EnrichmentReport:
    ok: bool
    ranks: dict
    mismatches: list
    colimit: DGAPresentation


def colim_enrichment_check(start: DGAPresentation, maps: Sequence[AlgebraMorphism],
                           through_degree: int = 3, weight: int = 1) -> EnrichmentReport:
    """Compare the algebra-level colimit with the module-level one on truncations."""
    objs = [start] + [f.target for f in maps]
    for j, f in enumerate(maps):
        if f.source != objs[j]:
            raise MorphismError(f"morphisms {j - 1} and {j} are not composable")
    # algebra level: a finite chain has the last stage as colimit
    inj = [AlgebraMorphism.identity(objs[-1])]
    for f in reversed(maps):
        inj.append(f.then(inj[-1]))
    inj.reverse()
    truncs = [truncate(A, through_degree, weight) for A in objs]
    cmaps = [_truncate_map(f, truncs[j], truncs[j + 1], through_degree) for j, f in enumerate(maps)]
    mod = colim_sequential(cmaps, start=truncs[0][0])
    mism = []
    if mod.obj != truncs[-1][0]:
        mism.append("object")
    for j, (g, a) in enumerate(zip(mod.injections, inj)):
        if g != _truncate_map(a, truncs[j], truncs[-1], through_degree):
            mism.append(f"injection {j}")
    ranks = {m: mod.obj.rank(m) for m in range(through_degree + 1)}
    return EnrichmentReport(not mism, ranks, mism, objs[-1])
