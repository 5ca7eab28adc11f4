"""Command line front end: ``weylcat <verb> ...``.

Reports are JSON with sorted keys.  Each report separates ``results``
(answers such as classification flags) from ``checks`` (pass/fail
verdicts); the exit code is 0 when every check passes, 1 when one
fails, 2 on malformed input or usage errors.  An error raised by the
computation itself, after every input parsed, is a failed check rather
than an input error: it is reported under ``error`` with exit 1.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from contextlib import contextmanager
from importlib import resources
from pathlib import Path

from . import __version__
from .chain import ChainMap, ComplexError, FreeComplex, classify, colim_sequential, homology
from .dga import DGAError
from .formats import (InputError, read_complex, read_gens, read_map, read_morphism,
                      read_square, sniff_kind)
from .lifting import LiftError, solve_lift
from .linalg import OperatorMatrix
from .ore import RingMismatchError
from .rings import ring_from_spec
from .sullivan import acyclicity_probe, colim_enrichment_check, factorize

SUITES = ("ore", "chain", "lifting", "dga", "sullivan", "fixtures")
# negative control: a deliberately broken relative algebra; not part of "all"
EXTRA_SUITES = ("tampered",)


# -- serialization -------------------------------------------------------------------

def _mat(M: OperatorMatrix) -> list:
    return [[M.ring.fmt(a) for a in row] for row in M.entries]


def complex_json(C: FreeComplex) -> dict:
    return {"ring": C.ring.spec,
            "ranks": {str(n): r for n, r in sorted(C.ranks.items())},
            "d": {str(n): _mat(M) for n, M in sorted(C.d.items())}}


def map_json(f: ChainMap) -> dict:
    return {str(n): _mat(M) for n, M in sorted(f.f.items())}


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


class OperationError(Exception):
    pass


@contextmanager
def _operation():
    try:
        yield
    except InputError:
        raise
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise OperationError(str(e)) from None


# -- verbs -----------------------------------------------------------------------------
# each returns (inputs, results, checks); reading happens outside _operation()

def _ring(args):
    return ring_from_spec(args.ring) if args.ring else None


def cmd_classify(args):
    f = read_map(args.map, _ring(args))
    with _operation():
        c = classify(f)
    return [args.map], {"classification": c.flags(), "evidence": c.evidence}, {}


def cmd_homology(args):
    C = read_complex(args.complex, _ring(args))
    if args.degree < 0:
        raise InputError("degree must be non-negative")
    with _operation():
        H = homology(C, args.degree)
    R = C.ring
    results = {
        "degree": H.degree,
        "is_zero": H.is_zero,
        "free_rank": H.free_rank,
        "torsion": [R.fmt(a) for a in H.torsion],
        "cycle_generators": [[R.fmt(a) for a in z] for z in H.generators],
        "relations": _mat(H.relations),
        "diagonal": [R.fmt(a) for a in H.diagonal],
    }
    return [args.complex], results, {}


def cmd_lift(args):
    sq = read_square(args.square, _ring(args))
    with _operation():
        cert = solve_lift(sq)
    results = {"lift_found": cert.found}
    checks = {"lift_found": cert.found}
    if cert.found:
        results["lift"] = map_json(cert.lift)
        checks["upper_triangle"] = sq.i.then(cert.lift) == sq.top
        checks["lower_triangle"] = cert.lift.then(sq.p) == sq.bottom
    else:
        deg, cell, rhs = cert.residual
        R = sq.p.ring
        results["residual"] = {"degree": deg, "cell": cell, "rhs": [R.fmt(a) for a in rhs]}
    return [args.square], results, checks


def cmd_factorize(args):
    phi = read_morphism(args.morphism)
    gens = read_gens(args.gens, phi.target) if args.gens else None
    with _operation():
        res = factorize(phi, gens, through_degree=args.through_degree, words=args.words)
    d = res.to_dict()
    checks = {k: v["ok"] for k, v in d.pop("verdicts").items()}
    witnesses = {k: v.witness for k, v in res.verdicts.items() if v.witness is not None}
    d["verdict_witnesses"] = {k: str(w) for k, w in witnesses.items()}
    A = phi.source
    if A.base == "point" and all(k >= 1 for _, k in A.gens):
        with _operation():
            table = acyclicity_probe(res.total, len(A.gens), k_max=2, n_max=args.through_degree)
        d["acyclicity_probe"] = {f"{k},{m}": v for (k, m), v in sorted(table.items())}
        checks["acyclicity_probe"] = all(v == 0 for v in table.values())
    inputs = [args.morphism] + ([args.gens] if args.gens else [])
    return inputs, d, checks


def cmd_colim(args):
    files = args.chain
    kinds = {sniff_kind(f) for f in files}
    if len(kinds) != 1:
        raise InputError("chain mixes chain maps and algebra morphisms")
    if kinds == {"map"}:
        maps = [read_map(f, _ring(args)) for f in files]
        for j in range(1, len(maps)):
            if maps[j].source != maps[j - 1].target:
                raise InputError(f"maps {j - 1} and {j} are not composable", files[j])
        with _operation():
            col = colim_sequential(maps)
            u = col.factor(list(col.injections), maps)
        compatible = all(maps[j].then(col.injections[j + 1]) == col.injections[j]
                         for j in range(len(maps)))
        results = {"level": "chain", "colimit": complex_json(col.obj),
                   "injections": [map_json(g) for g in col.injections]}
        checks = {"injections_compatible": compatible,
                  "factorization_is_identity": u == ChainMap.identity(col.obj)}
        return files, results, checks
    mors = [read_morphism(f) for f in files]
    for j in range(1, len(mors)):
        if mors[j].source != mors[j - 1].target:
            raise InputError(f"morphisms {j - 1} and {j} are not composable", files[j])
    with _operation():
        rep = colim_enrichment_check(mors[0].source, mors, args.through_degree)
    C = rep.colimit
    results = {"level": "algebra",
               "colimit": {"base": C.base, "generators": [[n, k] for n, k in C.gens],
                           "differential": {n: C.diff[n].format() for n in C.gens.names}},
               "truncated_ranks": {str(k): v for k, v in sorted(rep.ranks.items())},
               "mismatches": list(rep.mismatches)}
    return files, results, {"enrichment_commutes": rep.ok}


def cmd_verify(args):
    from .verify import run_suite
    suites = SUITES if args.suite == "all" else (args.suite,)
    results, checks = {}, {}
    for s in suites:
        r = run_suite(s, args.seed, ring=args.ring)
        for name, ok, info in r:
            checks[f"{s}.{name}"] = ok
            if info:
                results[f"{s}.{name}"] = info
    return [], results, checks


VERBS = {"classify": cmd_classify, "homology": cmd_homology, "lift": cmd_lift,
         "factorize": cmd_factorize, "colim": cmd_colim, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--ring", help="coefficient ring: Q, Fp:<p> or weyl1")
    common.add_argument("--through-degree", type=int, default=4, dest="through_degree")
    common.add_argument("--words", type=int, default=3, help="word-length bound for probes")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--timings", action="store_true",
                        help="include wall-clock timings (makes output non-reproducible)")
    ap = argparse.ArgumentParser(prog="weylcat", allow_abbrev=False,
                                 description="Model-structure computations over the Weyl algebra.")
    ap.add_argument("--version", action="version", version=f"weylcat {__version__}")
    sub = ap.add_subparsers(dest="verb", required=True)
    p = sub.add_parser("classify", parents=[common], allow_abbrev=False)
    p.add_argument("--map", required=True)
    p = sub.add_parser("homology", parents=[common], allow_abbrev=False)
    p.add_argument("--complex", required=True)
    p.add_argument("--degree", type=int, required=True)
    p = sub.add_parser("lift", parents=[common], allow_abbrev=False)
    p.add_argument("--square", required=True)
    p = sub.add_parser("factorize", parents=[common], allow_abbrev=False)
    p.add_argument("--morphism", required=True)
    p.add_argument("--gens")
    p = sub.add_parser("colim", parents=[common], allow_abbrev=False)
    p.add_argument("--chain", nargs="+", required=True)
    p = sub.add_parser("verify", parents=[common], allow_abbrev=False)
    p.add_argument("--suite", choices=("all",) + SUITES + EXTRA_SUITES, default="all")
    return ap


def run(argv=None) -> tuple[dict, int]:
    """Parse ``argv``, run the verb and return (report, exit code)."""
    report, code, _ = _run(build_parser().parse_args(argv))
    return report, code


def _arg_files(args) -> list:
    out = []
    for name in ("map", "complex", "square", "morphism", "gens", "chain"):
        v = getattr(args, name, None)
        out += v if isinstance(v, list) else [v] if v else []
    return out


def _run(args):
    report = {"tool": "weylcat", "version": __version__, "command": args.verb,
              "options": {"ring": args.ring, "seed": args.seed,
                          "through_degree": args.through_degree, "words": args.words}}
    t0 = time.perf_counter()
    try:
        if args.ring:
            ring_from_spec(args.ring)
        if args.through_degree < 0 or args.words < 1:
            raise InputError("--through-degree must be >= 0 and --words >= 1")
        inputs, results, checks = VERBS[args.verb](args)
    except OperationError as e:
        report.update(status="fail", inputs={str(p): _digest(p) for p in _arg_files(args)},
                      results={}, checks={"operation": False},
                      error={"message": str(e), "file": "", "line": 0, "col": 0})
        return report, 1, args.out
    except InputError as e:
        report.update(status="input_error", error={"message": e.msg, "file": e.path,
                                                    "line": e.line, "col": e.col})
        return report, 2, args.out
    except (ValueError, TypeError, RingMismatchError, LiftError, DGAError, ComplexError) as e:
        report.update(status="input_error", error={"message": str(e), "file": "", "line": 0, "col": 0})
        return report, 2, args.out
    report["inputs"] = {str(p): _digest(p) for p in inputs}
    report["results"] = results
    report["checks"] = checks
    ok = all(checks.values())
    report["status"] = "pass" if ok else "fail"
    if args.timings:
        report["timings"] = {"total_seconds": round(time.perf_counter() - t0, 6)}
    return report, 0 if ok else 1, args.out


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:  # usage errors and --help
        return int(e.code) if isinstance(e.code, int) else 2
    report, code, out = _run(args)
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    if "error" in report:
        sys.stderr.write(f"weylcat: {_err_line(report['error'])}\n")
    return code


def _err_line(err) -> str:
    where = err["file"]
    if err["line"]:
        where += f":{err['line']}" + (f":{err['col']}" if err["col"] else "")
    return f"{where}: {err['message']}" if where else err["message"]


def fixture_dir() -> Path:
    return Path(str(resources.files("weylcat") / "fixtures"))


if __name__ == "__main__":
    sys.exit(main())
