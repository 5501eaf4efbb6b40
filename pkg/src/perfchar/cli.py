"""perfchar command line: every subcommand prints one report (JSON or markdown) on stdout."""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .errors import PerfcharError, ResourceExceeded
from .reports.emit import render, with_schema

EXIT_OK, EXIT_USER, EXIT_UNDECIDED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fraction_text(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _ring(path):
    from .groebner.ideals import RingPresentation

    return RingPresentation.load(path)


# -- subcommands: each returns (report dict, exit code) ------------------------------------

def cmd_hk(args):
    from .groebner.ideals import IdealHandle, LevelRing
    from .hilbert_kunz import e_hk_estimate, hk_sequence, seibert_fit

    R = _ring(args.ring)
    I = IdealHandle(LevelRing(R, args.level), R.polys(args.ideal))
    rec = hk_sequence(I, args.max_level, d=args.dim)
    out = rec.to_dict()
    # rationality of the limit is only known here for polynomial rings
    out["rationality"] = ("known for polynomial rings" if not R.relations
                          else "not asserted for this ring; the estimate is empirical")
    est = None
    if len(rec.rows) >= 3:
        est = e_hk_estimate(rec)
        out["estimate"] = est.to_dict()
    if args.fit_seibert:
        fit = seibert_fit([r.length for r in rec.rows], R.p, rec.d)
        out["seibert"] = fit.to_dict()
    if args.figure:
        from .reports.figures import hk_ratio_figure

        hk_ratio_figure(rec, args.figure, est)
        out["figure"] = args.figure
    return with_schema("hk", out), EXIT_OK


def cmd_grade(args):
    from .groebner.ideals import IdealHandle, LevelRing
    from .homology.grade import cech_grade, ext_grade, koszul_grade

    R = _ring(args.ring)
    ring = LevelRing(R, args.level)
    seq = R.polys(args.sequence)
    M = IdealHandle(ring, R.polys(args.module) if args.module else [])
    results = {}
    if args.method in ("koszul", "all"):
        results["koszul"] = koszul_grade(seq, M).to_dict()
    if args.method in ("cech", "all"):
        results["cech"] = cech_grade(seq, M, window=args.window).to_dict()
    if args.method in ("ext", "all"):
        results["ext"] = ext_grade(IdealHandle(ring, seq), M).to_dict()
    values = {r["value"] for r in results.values()}
    out = {
        "ring": R.to_dict(),
        "level": args.level,
        "sequence": [str(x) for x in seq],
        "module_ideal": [str(g) for g in M.generators],
        "grades": results,
        "consistent": len(values) == 1,
    }
    return with_schema("grade", out), EXIT_OK


def cmd_resolve_colimit(args):
    from .groebner.ideals import ColimitIdeal, colimit_membership

    R = _ring(args.ring)
    C = ColimitIdeal(R, tuple(R.polys(args.roots)))
    J = ColimitIdeal(R, tuple(R.polys(args.times))) if args.times else None
    f = R.poly(args.element)
    res = colimit_membership(f, C, J, max_level=args.max_level)
    out = {
        "element": str(f),
        "ideal": str(C) if J is None else f"{C} * {J}",
        "found": res.found,
        "status": "Found" if res.found else "Inconclusive",
        "level": res.level,
        "generators": [str(g) for g in res.generators],
        "certificate": None if res.certificate is None else [str(c) for c in res.certificate],
        "levels_tried": list(res.tried),
    }
    return with_schema("resolve-colimit", out), EXIT_OK if res.found else EXIT_UNDECIDED


def cmd_tor(args):
    from .groebner.ideals import IdealHandle, LevelRing
    from .homology.resolution import ext, tor

    R = _ring(args.ring)
    ring = LevelRing(R, args.level)
    M = IdealHandle(ring, R.polys(args.left))
    N = IdealHandle(ring, R.polys(args.right))
    fn = ext if args.ext else tor
    res = fn(M, N, args.index, level=args.level)
    out = {"functor": "ext" if args.ext else "tor", "ring": R.to_dict(),
           "left": [str(g) for g in M.generators], "right": [str(g) for g in N.generators]}
    out.update(res.to_dict())
    return with_schema("tor", out), EXIT_OK


def cmd_vanish_check(args):
    from .groebner.ideals import ColimitIdeal
    from .homology.perfection import vanish_check

    R = _ring(args.ring)
    I = ColimitIdeal(R, tuple(R.polys(args.left)))
    J = ColimitIdeal(R, tuple(R.polys(args.right)))
    rep = vanish_check(I, J, samples=args.samples, max_slack=args.max_slack, level=args.level, seed=args.seed)
    out = rep.to_dict()
    if args.figure:
        from .reports.figures import slack_figure

        slack_figure(rep, args.figure)
        out["figure"] = args.figure
    return with_schema("vanish-check", out), EXIT_OK


def _witt_ring(args):
    from .witt import PerfectPolyRing, PrimeField

    if args.vars:
        return PerfectPolyRing(args.char, [v.strip() for v in args.vars.split(",")])
    return PrimeField(args.char)


def _witt_vec(text, ring, n):
    from .witt import WittVector

    coords = [c.strip() for c in text.split(",")]
    if len(coords) != n:
        raise PerfcharError(f"expected {n} coordinates, got {len(coords)}")
    return WittVector(tuple(int(c) if not hasattr(ring, "variables") else c for c in coords), ring, ring.p)


def cmd_witt(args):
    from .witt import isomorphism_table, to_integer_mod, all_vectors, witt_add, witt_mod_p_check, witt_mul

    ring = _witt_ring(args)
    n = args.length
    out = {"p": args.char, "length": n, "coefficients": repr(ring)}
    if args.table:
        if args.vars:
            raise PerfcharError("--table needs F_p coefficients")
        tab = isomorphism_table(args.char, n)
        out["isomorphism"] = tab.to_dict()
        out["rows"] = [{"vector": str(v), "integer": to_integer_mod(v)} for v in all_vectors(ring, n)]
    elif args.add or args.mul:
        a_text, b_text = args.add or args.mul
        a, b = _witt_vec(a_text, ring, n), _witt_vec(b_text, ring, n)
        res = witt_add(a, b) if args.add else witt_mul(a, b)
        out.update({"op": "add" if args.add else "mul", "a": str(a), "b": str(b), "result": str(res)})
    else:
        out["mod_p_check"] = witt_mod_p_check(ring, n, samples=args.samples, seed=args.seed).to_dict()
    return with_schema("witt", out), EXIT_OK


def cmd_tilt(args):
    import json
    from pathlib import Path

    from .errors import PresentationError
    from .fontaine import ResidueOfIntegers, projection_check, tilt, witness_check

    try:
        ring_data = json.loads(Path(args.ring).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise PresentationError(f"cannot read ring file {args.ring}: {exc}") from None
    T = tilt(ring_data, args.length)
    out = {"tilt": T.describe(), "length": T.L, "residue_perfect": T.residue.perfect}
    if isinstance(T.residue, ResidueOfIntegers):
        elems = T.enumerate_valid()
        out["elements"] = [str(e) for e in elems]
        out["all_constant"] = all(len(set(e.coords)) == 1 for e in elems)
        out["cardinality"] = len(elems)
    if args.witness:
        out["witness"] = witness_check(T, args.witness)
    if T.residue.perfect:
        out["projection"] = projection_check(T, samples=args.samples, seed=args.seed).to_dict()
    return with_schema("tilt", out), EXIT_OK


def cmd_valuation(args):
    from .perfect_poly import parse_poly
    from .valuation import perfect_valuation

    f = parse_poly(args.element, args.char, [args.var])
    v = perfect_valuation(f, Fraction(args.truncation) if args.truncation else None)
    return with_schema("valuation", {"element": str(f), "p": args.char, "valuation": str(v)}), EXIT_OK


def cmd_ext1_check(args):
    from .perfect_poly import PerfPoly, parse_poly
    from .valuation import build_chain, ext1_chain_recovery, perfect_valuation

    p, N = args.char, args.length
    if N < 1:
        raise PerfcharError("length must be at least 1")
    x = PerfPoly.var(args.var, p, [args.var])
    a_N = parse_poly(args.seed, p, [args.var])
    chain = build_chain(a_N, x, p, N)
    rep = ext1_chain_recovery(chain, p, x)
    vals = [perfect_valuation(a) for a in chain]
    out = rep.to_dict()
    out["chain"] = [{"k": k, "a_k": str(a), "v": str(v)} for k, (a, v) in enumerate(zip(chain, vals), start=1)]
    if args.figure:
        from .reports.figures import chain_valuation_figure

        chain_valuation_figure(chain, vals, rep.bound, args.figure)
        out["figure"] = args.figure
    return with_schema("ext1-check", out), EXIT_OK


def cmd_classify(args):
    from .reports.classify import Inconclusive, classify_curve, load_embedding

    R = _ring(args.ring)
    Nn = _ring(args.normalization)
    rep = classify_curve(R, Nn, load_embedding(args.embedding), max_level=args.max_level)
    code = EXIT_UNDECIDED if isinstance(rep.verdict, Inconclusive) else EXIT_OK
    return with_schema("classify", rep.to_dict()), code


def cmd_invariants(args):
    from .reports.classify import invariant_table

    return with_schema("invariants", invariant_table(_ring(args.ring))), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="perfchar", description=__doc__)
    parser.add_argument("--format", choices=("json", "md"), default="json")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--format", choices=("json", "md"), default=argparse.SUPPRESS)
        sp.set_defaults(func=fn)
        return sp

    sp = add("hk", cmd_hk, "colength sequence of bracket powers and e_HK estimate")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--ideal", required=True)
    sp.add_argument("--max-level", type=int, default=4)
    sp.add_argument("--level", type=int, default=0)
    sp.add_argument("--dim", type=int, default=None, help="override the computed Krull dimension")
    sp.add_argument("--fit-seibert", action="store_true")
    sp.add_argument("--figure", help="write a ratio plot to this path")

    sp = add("grade", cmd_grade, "Koszul, Čech and Ext grade of a sequence on ring/I")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--sequence", required=True)
    sp.add_argument("--module", default="", help="generators of I for the module ring/I")
    sp.add_argument("--method", choices=("koszul", "cech", "ext", "all"), default="all")
    sp.add_argument("--level", type=int, default=0)
    sp.add_argument("--window", type=int, default=2)

    sp = add("resolve-colimit", cmd_resolve_colimit, "search membership in a colimit ideal")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--roots", required=True)
    sp.add_argument("--element", required=True)
    sp.add_argument("--times", default="", help="roots of a second colimit ideal to multiply by")
    sp.add_argument("--max-level", type=int, default=None)

    sp = add("tor", cmd_tor, "Tor (or Ext) of two cyclic modules")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.add_argument("--index", type=int, required=True)
    sp.add_argument("--level", type=int, default=0)
    sp.add_argument("--ext", action="store_true")

    sp = add("vanish-check", cmd_vanish_check, "sampled intersection-versus-product test")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--max-slack", type=int, default=4)
    sp.add_argument("--level", type=int, default=0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--figure", help="write a slack histogram to this path")

    sp = add("witt", cmd_witt, "truncated Witt vector arithmetic")
    sp.add_argument("--char", type=int, required=True)
    sp.add_argument("--length", type=int, required=True)
    sp.add_argument("--vars", default="", help="use the perfection of F_p[vars] as coefficients")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--table", action="store_true")
    g.add_argument("--add", nargs=2, metavar=("A", "B"))
    g.add_argument("--mul", nargs=2, metavar=("A", "B"))
    g.add_argument("--mod-p-check", action="store_true")
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("tilt", cmd_tilt, "truncated Fontaine ring")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--length", type=int, required=True)
    sp.add_argument("--witness", default="")
    sp.add_argument("--samples", type=int, default=10)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("valuation", cmd_valuation, "normalized valuation of a one-variable element")
    sp.add_argument("--char", type=int, required=True)
    sp.add_argument("--element", required=True)
    sp.add_argument("--var", default="x")
    sp.add_argument("--truncation", default="")

    sp = add("ext1-check", cmd_ext1_check, "valuation bound and recovery along a relation chain")
    sp.add_argument("--char", type=int, required=True)
    sp.add_argument("--length", type=int, required=True)
    sp.add_argument("--seed", required=True, help="the last chain element a_N")
    sp.add_argument("--var", default="x")
    sp.add_argument("--figure", help="write a valuation plot to this path")

    sp = add("classify", cmd_classify, "F-coherence of a curve from its normalization")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--normalization", required=True)
    sp.add_argument("--embedding", required=True)
    sp.add_argument("--max-level", type=int, default=3)

    sp = add("invariants", cmd_invariants, "dimension table with citations")
    sp.add_argument("--ring", required=True)
    return parser


def run_cli(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError("missing subcommand")
        report, code = args.func(args)
    except UsageError as exc:
        print(f"perfchar: {exc}", file=stderr)
        return EXIT_USER
    except ResourceExceeded as exc:
        print(f"perfchar: resource limit: {exc}", file=stderr)
        return EXIT_UNDECIDED
    except (PerfcharError, ValueError, OSError) as exc:
        print(f"perfchar: {exc}", file=stderr)
        return EXIT_USER
    stdout.write(render(report, args.format))
    return code


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
