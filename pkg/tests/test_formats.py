import random

import pytest

from weylcat.chain import ChainMap, disc, sphere
from weylcat.cli import fixture_dir
from weylcat.dga import random_presentation
from weylcat.formats import (InputError, read_algebra, read_complex, read_gens, read_map, read_morphism,
                             read_square, sniff_kind, write_algebra, write_complex, write_map)
from weylcat.ore import D
from weylcat.rings import GF, QQ, WEYL1
from weylcat.samples import random_complex
from weylcat.syntax import parse_operator

FIX = fixture_dir()


@pytest.mark.parametrize("R", [QQ, GF(5), WEYL1])
def test_complex_roundtrip(tmp_path, R):
    rng = random.Random(7)
    for k in range(5):
        C = random_complex(R, rng, max_deg=3, max_rank=3)
        p = tmp_path / f"c{k}.cx"
        p.write_text(write_complex(C))
        assert read_complex(p) == C


def test_map_roundtrip(tmp_path):
    S, Dn = sphere(0, WEYL1), disc(1, WEYL1)
    (tmp_path / "s.cx").write_text(write_complex(S))
    (tmp_path / "d.cx").write_text(write_complex(Dn))
    f = ChainMap.identity(Dn)
    (tmp_path / "f.map").write_text(write_map(f, "d.cx", "d.cx"))
    assert read_map(tmp_path / "f.map") == f
    assert sniff_kind(tmp_path / "f.map") == "map"


@pytest.mark.parametrize("base", ["weyl1", "point"])
def test_algebra_roundtrip(tmp_path, base):
    rng = random.Random(3)
    for k in range(5):
        A = random_presentation(rng, base, max_deg=3, per_degree=2)
        p = tmp_path / f"a{k}.alg"
        p.write_text(write_algebra(A))
        B = read_algebra(p)
        assert B.gens.names == A.gens.names and B.base == A.base
        assert all(B.diff[n] == A.diff[n] for n in A.gens.names)


def test_fixture_entries():
    f = read_map(FIX / "top_x.map")
    assert f.component(0)[0, 0] == parse_operator("x*d + 1/(x+1)")
    C = read_complex(FIX / "torsion.cx")
    assert C.diff(1)[0, 0] == D
    assert read_complex(FIX / "disc1.cx") == disc(1, WEYL1)
    sq = read_square(FIX / "lift.sq")
    assert sq.i.source == sphere(0, WEYL1)


def test_morphism_and_gens():
    phi = read_morphism(FIX / "phi.mor")
    assert phi.images["a"] == phi.target.gen("c")
    gens = read_gens(FIX / "phi.gens", phi.target)
    assert [lab for lab, _ in gens]
    assert sniff_kind(FIX / "phi.mor") == "morphism"


def test_syntax_error_position():
    with pytest.raises(InputError) as e:
        read_complex(FIX / "bad_syntax.cx")
    assert (e.value.line, e.value.col) == (6, 3)
    assert str(e.value).endswith(f":6:3: {e.value.msg}")


def test_d_squared_rejected():
    with pytest.raises(Exception) as e:
        read_complex(FIX / "bad_d2.cx")
    assert "2" in str(e.value)


def test_unknown_ring_and_mismatch():
    with pytest.raises(InputError) as e:
        read_complex(FIX / "bad_ring.cx")
    assert e.value.line == 1
    with pytest.raises(InputError):
        read_complex(FIX / "disc1.cx", ring=QQ)


@pytest.mark.parametrize("text,line", [
    ("ring Q\ndeg 0 rank 1\ndeg 1 rank 1\nd 1 =\n1 1\n1 2\n", 6),
    ("ring Q\ndeg 0 rank 1\ndeg 1 rank 1\nd 1 =\n1 x\n", 5),
    ("ring Q\nbogus line\n", 2),
])
def test_malformed_lines(tmp_path, text, line):
    p = tmp_path / "bad.cx"
    p.write_text(text)
    with pytest.raises(InputError) as e:
        read_complex(p)
    assert e.value.line == line


def test_missing_file(tmp_path):
    with pytest.raises(InputError):
        read_complex(tmp_path / "nope.cx")
    with pytest.raises(InputError):
        read_algebra(tmp_path / "nope.alg")


def test_reserved_generator_names(tmp_path):
    p = tmp_path / "r.alg"
    p.write_text("base weyl1\ngen x deg 1\n")
    with pytest.raises(InputError) as e:
        read_algebra(p)
    assert e.value.line == 2
