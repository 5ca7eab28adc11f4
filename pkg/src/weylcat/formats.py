"""Readers and writers for the plain-text input formats.

Every format is line based; ``#`` starts a comment and blank lines are
ignored.  Paths inside a file are resolved relative to that file.

complex::

    ring weyl1
    deg 0 rank 1
    deg 1 rank 1
    d 1 =
    1 1
    d

map::

    source a.cx
    target b.cx
    map deg 0 =
    1 1
    1

square: ``i``, ``p``, ``top``, ``bottom`` lines naming map files.

algebra::

    base weyl1
    gen v deg 1
    gen u deg 2
    diff u = x*op(d, v)

morphism: ``source``/``target`` algebra files and ``send <gen> = <expr>`` lines.
gens: ``gen <label> = <expr>`` lines (elements of a morphism's target).
"""
from __future__ import annotations

import re
from pathlib import Path

from .chain import ChainMap, ComplexError, FreeComplex
from .dga import AlgebraMorphism, AlgElement, DGAPresentation, GenSet, parse_alg_expr
from .lifting import LiftingSquare
from .linalg import OperatorMatrix
from .ore import RingMismatchError
from .rings import CoeffRing, ring_from_spec
from .syntax import ParseError, parse_operator

__all__ = [
    "InputError",
    "read_complex",
    "read_map",
    "read_square",
    "read_algebra",
    "read_morphism",
    "read_gens",
    "sniff_kind",
    "write_complex",
    "write_map",
    "write_algebra",
]


class InputError(ValueError):
    """Malformed or invalid input file; carries file, line and column."""

    def __init__(self, msg: str, path: str | Path = "", line: int = 0, col: int = 0):
        self.msg, self.path, self.line, self.col = msg, str(path), line, col
        where = str(path)
        if line:
            where += f":{line}"
            if col:
                where += f":{col}"
        super().__init__(f"{where}: {msg}" if where else msg)


def _lines(path: Path):
    try:
        text = path.read_text()
    except OSError as e:
        raise InputError(f"cannot read file ({e.strerror})", path) from None
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            out.append((no, line))
    return out


def _split_entries(line: str):
    """Whitespace-separated entries; parentheses may contain spaces."""
    toks, cur, depth, start = [], "", 0, 0
    for k, ch in enumerate(line):
        if ch.isspace() and depth == 0:
            if cur:
                toks.append((cur, start))
                cur = ""
            continue
        if not cur:
            start = k
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    if cur:
        toks.append((cur, start))
    return toks


def _read_matrix(lines, pos: int, ring: CoeffRing, path) -> tuple[OperatorMatrix, int]:
    if pos >= len(lines):
        raise InputError("missing matrix header 'rows cols'", path)
    no, head = lines[pos]
    m = re.fullmatch(r"\s*(\d+)\s+(\d+)\s*", head)
    if not m:
        raise InputError("expected matrix header 'rows cols'", path, no, 1)
    r, c = int(m.group(1)), int(m.group(2))
    rows = []
    for k in range(r):
        if pos + 1 + k >= len(lines):
            raise InputError(f"matrix ends after {k} of {r} rows", path, no)
        lno, text = lines[pos + 1 + k]
        ents = _split_entries(text)
        if len(ents) != c:
            raise InputError(f"row has {len(ents)} entries, expected {c}", path, lno, 1)
        row = []
        for tok, col in ents:
            try:
                row.append(ring.from_operator(parse_operator(tok, lno, col)))
            except ParseError as e:
                raise InputError(e.msg, path, e.line or lno, e.col) from None
            except (RingMismatchError, ZeroDivisionError) as e:
                raise InputError(str(e), path, lno, col + 1) from None
        rows.append(row)
    return OperatorMatrix(ring, r, c, rows), pos + 1 + r


def _resolve(ring_line: str | None, ring: CoeffRing | None, path, no=0) -> CoeffRing:
    if ring_line is not None:
        try:
            fr = ring_from_spec(ring_line)
        except ValueError as e:
            raise InputError(str(e), path, no, 6) from None
        if ring is not None and ring != fr:
            raise InputError(f"file ring {fr.spec} disagrees with --ring {ring.spec}", path, no)
        return fr
    if ring is None:
        raise InputError("no 'ring' line and no --ring given", path)
    return ring


def read_complex(path, ring: CoeffRing | None = None) -> FreeComplex:
    path = Path(path)
    lines = _lines(path)
    ring_line, ring_no = None, 0
    ranks, mats = {}, {}
    pending = []
    pos = 0
    while pos < len(lines):
        no, text = lines[pos]
        words = text.split()
        if words[0] == "ring":
            if len(words) != 2:
                raise InputError("expected 'ring <spec>'", path, no, 1)
            ring_line, ring_no = words[1], no
            pos += 1
        elif words[0] == "deg":
            m = re.fullmatch(r"\s*deg\s+(-?\d+)\s+rank\s+(\d+)\s*", text)
            if not m:
                raise InputError("expected 'deg <n> rank <r>'", path, no, 1)
            n = int(m.group(1))
            if n < 0:
                raise InputError("negative degree", path, no, text.index(m.group(1)) + 1)
            ranks[n] = int(m.group(2))
            pos += 1
        elif words[0] == "d":
            m = re.fullmatch(r"\s*d\s+(\d+)\s*=\s*", text)
            if not m:
                raise InputError("expected 'd <n> ='", path, no, 1)
            pending.append((int(m.group(1)), pos + 1, no))
            # skip the block; parsed once the ring is known
            hdr = lines[pos + 1][1].split() if pos + 1 < len(lines) else []
            nrows = int(hdr[0]) if len(hdr) == 2 and hdr[0].isdigit() else 0
            pos += 2 + nrows
        else:
            raise InputError(f"unknown directive {words[0]!r}", path, no, 1)
    R = _resolve(ring_line, ring, path, ring_no)
    for n, at, no in pending:
        M, _ = _read_matrix(lines, at, R, path)
        if n in mats:
            raise InputError(f"d {n} given twice", path, no, 1)
        mats[n] = M
    try:
        return FreeComplex(R, ranks, mats)
    except ComplexError as e:
        raise InputError(str(e) + (f" (degree {e.degree})" if e.degree is not None else ""), path) from None


def read_map(path, ring: CoeffRing | None = None) -> ChainMap:
    path = Path(path)
    lines = _lines(path)
    src = tgt = None
    comps: dict = {}
    pending = []
    pos = 0
    while pos < len(lines):
        no, text = lines[pos]
        words = text.split()
        if words[0] in ("source", "target") and len(words) == 2:
            C = read_complex(path.parent / words[1], ring)
            if words[0] == "source":
                src = C
            else:
                tgt = C
            pos += 1
        elif words[0] == "map":
            m = re.fullmatch(r"\s*map\s+deg\s+(\d+)\s*=\s*", text)
            if not m:
                raise InputError("expected 'map deg <n> ='", path, no, 1)
            pending.append((int(m.group(1)), pos + 1, no))
            hdr = lines[pos + 1][1].split() if pos + 1 < len(lines) else []
            nrows = int(hdr[0]) if len(hdr) == 2 and hdr[0].isdigit() else 0
            pos += 2 + nrows
        else:
            raise InputError(f"unknown directive {words[0]!r}", path, no, 1)
    if src is None or tgt is None:
        raise InputError("map file needs 'source' and 'target' lines", path)
    if src.ring != tgt.ring:
        raise InputError("source and target over different rings", path)
    for n, at, no in pending:
        comps[n], _ = _read_matrix(lines, at, src.ring, path)
    try:
        return ChainMap(src, tgt, comps, path.stem)
    except ComplexError as e:
        raise InputError(str(e), path) from None


def read_square(path, ring: CoeffRing | None = None) -> LiftingSquare:
    path = Path(path)
    edges = {}
    for no, text in _lines(path):
        words = text.split()
        if len(words) != 2 or words[0] not in ("i", "p", "top", "bottom"):
            raise InputError("expected '<i|p|top|bottom> <map file>'", path, no, 1)
        edges[words[0]] = read_map(path.parent / words[1], ring)
    missing = [k for k in ("i", "p", "top", "bottom") if k not in edges]
    if missing:
        raise InputError(f"square is missing edge {missing[0]!r}", path)
    try:
        return LiftingSquare(edges["i"], edges["p"], edges["top"], edges["bottom"])
    except ValueError as e:
        raise InputError(str(e), path) from None


def read_algebra(path) -> DGAPresentation:
    path = Path(path)
    base = "weyl1"
    gens, diffs = [], []
    for no, text in _lines(path):
        words = text.split()
        if words[0] == "base":
            if len(words) != 2 or words[1] not in ("weyl1", "point"):
                raise InputError("expected 'base weyl1' or 'base point'", path, no, 1)
            base = words[1]
        elif words[0] == "gen":
            m = re.fullmatch(r"\s*gen\s+([A-Za-z_][A-Za-z0-9_.']*)\s+deg\s+(\d+)\s*", text)
            if not m:
                raise InputError("expected 'gen <name> deg <n>'", path, no, 1)
            if m.group(1) in ("x", "d", "op"):
                raise InputError(f"{m.group(1)!r} is reserved", path, no, text.index(m.group(1)) + 1)
            gens.append((m.group(1), int(m.group(2)), no))
        elif words[0] == "diff":
            m = re.fullmatch(r"(\s*diff\s+([A-Za-z_][A-Za-z0-9_.']*)\s*=)(.*)", text)
            if not m:
                raise InputError("expected 'diff <name> = <expr>'", path, no, 1)
            diffs.append((m.group(2), m.group(3), len(m.group(1)), no))
        else:
            raise InputError(f"unknown directive {words[0]!r}", path, no, 1)
    try:
        G = GenSet([(n, k) for n, k, _ in gens])
    except ValueError as e:
        raise InputError(str(e), path) from None
    dd = {}
    for name, expr, col0, no in diffs:
        if name not in G:
            raise InputError(f"diff for unknown generator {name!r}", path, no, 6)
        dd[name] = _expr(expr, G, base, path, no, col0)
    try:
        return DGAPresentation(G, dd, base)
    except ValueError as e:
        raise InputError(str(e), path) from None


def _expr(text, G, base, path, no, col0) -> AlgElement:
    try:
        return parse_alg_expr(text, G, base, no, col0)
    except ParseError as e:
        raise InputError(e.msg, path, e.line or no, e.col) from None


def read_morphism(path) -> AlgebraMorphism:
    path = Path(path)
    src = tgt = None
    sends = []
    for no, text in _lines(path):
        words = text.split()
        if words[0] in ("source", "target") and len(words) == 2:
            A = read_algebra(path.parent / words[1])
            if words[0] == "source":
                src = A
            else:
                tgt = A
        elif words[0] == "send":
            m = re.fullmatch(r"(\s*send\s+([A-Za-z_][A-Za-z0-9_.']*)\s*=)(.*)", text)
            if not m:
                raise InputError("expected 'send <gen> = <expr>'", path, no, 1)
            sends.append((m.group(2), m.group(3), len(m.group(1)), no))
        else:
            raise InputError(f"unknown directive {words[0]!r}", path, no, 1)
    if src is None or tgt is None:
        raise InputError("morphism file needs 'source' and 'target' lines", path)
    images = {}
    for name, expr, col0, no in sends:
        if name not in src.gens:
            raise InputError(f"unknown source generator {name!r}", path, no, 6)
        images[name] = _expr(expr, tgt.gens, tgt.base, path, no, col0)
    for n in src.gens.names:
        images.setdefault(n, AlgElement.zero(tgt.gens))
    try:
        return AlgebraMorphism(src, tgt, images)
    except ValueError as e:
        raise InputError(str(e), path) from None


def read_gens(path, B: DGAPresentation) -> list:
    path = Path(path)
    out = []
    for no, text in _lines(path):
        m = re.fullmatch(r"(\s*gen\s+([A-Za-z_][A-Za-z0-9_.']*)\s*=)(.*)", text)
        if not m:
            raise InputError("expected 'gen <label> = <expr>'", path, no, 1)
        out.append((m.group(2), _expr(m.group(3), B.gens, B.base, path, no, len(m.group(1)))))
    return out


def sniff_kind(path) -> str:
    """'map' for chain-map files, 'morphism' for algebra morphisms."""
    path = Path(path)
    for _, text in _lines(path):
        w = text.split()[0]
        if w == "map":
            return "map"
        if w == "send":
            return "morphism"
        if w == "source":
            src = path.parent / text.split()[1]
            heads = {t.split()[0] for _, t in _lines(src)}
            return "map" if heads & {"ring", "deg", "d"} else "morphism"
    raise InputError("cannot tell a map file from a morphism file", path)


# -- writers ---------------------------------------------------------------------------

def write_complex(C: FreeComplex) -> str:
    out = [f"ring {C.ring.spec}"]
    for n in sorted(C.ranks):
        out.append(f"deg {n} rank {C.rank(n)}")
    for n in sorted(C.d):
        out.append(f"d {n} =")
        out.append(C.d[n].format())
    return "\n".join(out) + "\n"


def write_map(f: ChainMap, source: str, target: str) -> str:
    out = [f"source {source}", f"target {target}"]
    for n in sorted(f.f):
        out.append(f"map deg {n} =")
        out.append(f.f[n].format())
    return "\n".join(out) + "\n"


def write_algebra(A: DGAPresentation) -> str:
    out = [f"base {A.base}"]
    out += [f"gen {n} deg {k}" for n, k in A.gens]
    out += [f"diff {n} = {A.diff[n].format()}" for n in A.gens.names if not A.diff[n].is_zero()]
    return "\n".join(out) + "\n"
