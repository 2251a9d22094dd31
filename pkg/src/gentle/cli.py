"""Command line front end: every operation with JSON output on stdout.

Exit codes: 0 all checks pass, 1 input error, 2 a spectrum gap was found,
3 an assertion of the built-in counterexample scan failed.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from .core import PresentationError, NotComposable, parse_presentation, validate_gentle, path_basis, dim_projective
from .walks import (GBA, GST, enumerate_gba, enumerate_gst, is_derived_discrete,
                    parse_walk)
from .complexes import band_complex, complex_to_json, string_complex
from .cohomology import beta_cohomology, cohomology_dims
from .nogaps import (ReductionError, hl_spectrum, reduce_band, reduce_beta,
                     reduce_string, verify_counterexample_a0)

_FRACTION = re.compile(r"^-?\d+(/[1-9]\d*)?$")


def _load(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise PresentationError(f"cannot read {path}: {exc}") from exc
    pres = parse_presentation(text)
    report = validate_gentle(pres)
    return pres, report


def _require_valid(pres, report):
    if not report.ok:
        raise PresentationError(
            f"presentation {pres.name!r} is not gentle: "
            + "; ".join(v.message for v in report.violations))


def _parse_lambda(text):
    if not _FRACTION.match(text):
        raise PresentationError(
            f"lambda must be an exact integer or fraction like 1/2, got {text!r}")
    value = Fraction(text)
    if value == 0:
        raise PresentationError("lambda must be nonzero")
    return value


def _emit(payload):
    json.dump(payload, sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")


def cmd_validate(args):
    pres, report = _load(args.algebra)
    _emit({"algebra": pres.name, **report.to_json()})
    return 0 if report.ok else 1


def cmd_basis(args):
    pres, report = _load(args.algebra)
    _require_valid(pres, report)
    basis = path_basis(pres)
    _emit({
        "algebra": pres.name,
        "size": len(basis),
        "paths": [p.label() for p in basis],
        "projective_dimensions": {v: dim_projective(pres, v) for v in pres.vertices},
    })
    return 0


def cmd_enumerate(args):
    pres, report = _load(args.algebra)
    _require_valid(pres, report)
    strings = enumerate_gst(pres, args.max_arrows)
    payload = {
        "algebra": pres.name,
        "max_arrows": args.max_arrows,
        "complete": strings.complete,
        "strings": [w.literal() for w in strings.walks],
    }
    if args.bands:
        bands = enumerate_gba(pres, args.max_arrows)
        payload["bands"] = [w.literal() for w in bands.walks]
    _emit(payload)
    return 0


def cmd_complex(args):
    pres, report = _load(args.algebra)
    _require_valid(pres, report)
    walk = parse_walk(pres, args.walk)
    if args.band:
        if walk.kind != GBA:
            raise PresentationError(f"walk {args.walk!r} is not a band: {walk.reason or walk.kind}")
        cx = band_complex(pres, walk, _parse_lambda(args.lam), args.mult)
    else:
        if walk.kind not in (GST, GBA):
            raise PresentationError(f"walk {args.walk!r} is not a generalized string: {walk.reason}")
        cx = string_complex(pres, walk)
    _emit({"algebra": pres.name, "walk": walk.literal(), **complex_to_json(pres, cx)})
    return 0


def cmd_cohomology(args):
    pres, report = _load(args.algebra)
    _require_valid(pres, report)
    walk = parse_walk(pres, args.walk)
    if args.band:
        if walk.kind != GBA:
            raise PresentationError(f"walk {args.walk!r} is not a band: {walk.reason or walk.kind}")
        vec = cohomology_dims(pres, band_complex(pres, walk, _parse_lambda(args.lam), args.mult))
    elif args.beta:
        if walk.kind not in (GST, GBA):
            raise PresentationError(f"walk {args.walk!r} is not a generalized string: {walk.reason}")
        vec = beta_cohomology(pres, walk)
    else:
        if walk.kind not in (GST, GBA):
            raise PresentationError(f"walk {args.walk!r} is not a generalized string: {walk.reason}")
        vec = cohomology_dims(pres, string_complex(pres, walk))
    _emit(vec.to_json())
    return 0


def cmd_spectrum(args):
    pres, report = _load(args.algebra)
    _require_valid(pres, report)
    result = hl_spectrum(pres, args.max_arrows, include_bands=not args.no_bands,
                         reduce_check=args.reduce_check)
    _emit({"algebra": pres.name, **result.to_json()})
    if result.failures:
        return 3
    if result.gaps:
        return 2
    return 0


def cmd_reduce(args):
    pres, report = _load(args.algebra)
    _require_valid(pres, report)
    walk = parse_walk(pres, args.walk)
    if args.band:
        trace = reduce_band(pres, walk, _parse_lambda(args.lam), args.mult,
                            negative=args.negative)
    elif args.beta:
        trace = reduce_beta(pres, walk, negative=args.negative)
    else:
        trace = reduce_string(pres, walk, negative=args.negative)
    _emit(trace.to_json())
    return 0


def cmd_discrete(args):
    pres, report = _load(args.algebra)
    _require_valid(pres, report)
    _emit({"algebra": pres.name, **is_derived_discrete(pres).to_json()})
    return 0


def cmd_demo_a0(args):
    report = verify_counterexample_a0()
    _emit(report)
    return 0 if report["pass"] else 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gentle",
        description="string and band combinatorics for gentle algebra presentations")
    sub = parser.add_subparsers(dest="verb", required=True)

    def with_algebra(p):
        p.add_argument("algebra", help="presentation file")
        return p

    with_algebra(sub.add_parser("validate", help="check the gentleness axioms")) \
        .set_defaults(func=cmd_validate)
    with_algebra(sub.add_parser("basis", help="path basis and projective dimensions")) \
        .set_defaults(func=cmd_basis)

    p = with_algebra(sub.add_parser("enumerate", help="generalized strings up to a bound"))
    p.add_argument("--max-arrows", type=int, required=True)
    p.add_argument("--bands", action="store_true", help="also list generalized bands")
    p.set_defaults(func=cmd_enumerate)

    p = with_algebra(sub.add_parser("complex", help="projective complex of a walk"))
    p.add_argument("--walk", required=True, help="walk literal, e.g. 'a1 , ~a2.a3'")
    p.add_argument("--band", action="store_true")
    p.add_argument("--lambda", dest="lam", default="1", help="band parameter (exact fraction)")
    p.add_argument("--mult", type=int, default=1, help="band multiplicity d")
    p.set_defaults(func=cmd_complex)

    p = with_algebra(sub.add_parser("cohomology", help="cohomology dimension vector"))
    p.add_argument("--walk", required=True)
    p.add_argument("--band", action="store_true")
    p.add_argument("--beta", action="store_true", help="erase the lowest occupied degree")
    p.add_argument("--lambda", dest="lam", default="1")
    p.add_argument("--mult", type=int, default=1)
    p.set_defaults(func=cmd_cohomology)

    p = with_algebra(sub.add_parser("spectrum", help="achieved cohomological lengths"))
    p.add_argument("--max-arrows", type=int, required=True)
    p.add_argument("--no-bands", action="store_true")
    p.add_argument("--reduce-check", action="store_true",
                   help="verify a length l-1 witness for every achieved l > 1")
    p.set_defaults(func=cmd_spectrum)

    p = with_algebra(sub.add_parser("reduce", help="construct a witness one length lower"))
    p.add_argument("--walk", required=True)
    p.add_argument("--band", action="store_true")
    p.add_argument("--beta", action="store_true")
    p.add_argument("--negative", action="store_true", help="prefer the mirrored construction")
    p.add_argument("--lambda", dest="lam", default="1")
    p.add_argument("--mult", type=int, default=1)
    p.set_defaults(func=cmd_reduce)

    with_algebra(sub.add_parser("discrete", help="decide derived discreteness")) \
        .set_defaults(func=cmd_discrete)

    sub.add_parser("demo-a0", help="run the built-in counterexample scan") \
        .set_defaults(func=cmd_demo_a0)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PresentationError, NotComposable, ReductionError) as exc:
        json.dump({"error": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
