"""Command line front end: ``unitorus <verb> ...``.

Reports are JSON on stdout with sorted keys.  Exit codes: 0 success, 2 parse
error, 3 invariant violation, 4 undetermined (for instance no joint chain).
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import analysis, gallery
from . import io as gio
from .errors import BadParameters, ParseError
from .filtration import DEFAULT_FAMILY_SCALE

EXIT_OK, EXIT_PARSE, EXIT_VIOLATION, EXIT_UNDETERMINED = 0, 2, 3, 4


def _emit(report, out=None):
    text = json.dumps(analysis.jsonable(report), indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _map(fn, items, jobs):
    """Order-preserving map, in worker processes when ``jobs > 1``."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _pq(text):
    if text == "all":
        return "all"
    try:
        p, q = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected 'all' or 'p,q'") from None
    return (p, q)


def _scale(text):
    try:
        s = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("expected a rational p/q") from None
    if not 0 < s < 1:
        raise argparse.ArgumentTypeError("family scale must lie strictly between 0 and 1")
    return s


def _load(path):
    return gio.load(path)


def cmd_analyze_group(args):
    rep = analysis.analyze_group(_load(args.file))
    _emit(rep, args.out)
    return analysis.exit_code([rep])


def cmd_growth(args):
    gf = _load(args.file)
    if args.pq != "all" and not all(0 <= x <= gf.n for x in args.pq):
        raise BadParameters(f"degree {args.pq} outside 0..{gf.n}")
    rep = analysis.growth_report(gf, args.pq, args.samples, args.max_word_len)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(analysis.growth_csv(rep))
    _emit(rep, args.out)
    return analysis.exit_code([rep])


def cmd_decompose(args):
    gf = _load(args.file)
    if args.generator is not None and not 0 <= args.generator < len(gf.matrices):
        raise BadParameters(f"generator index {args.generator} out of range")
    rep = analysis.decompose_report(gf, args.generator, args.family_scale, args.seed, args.hr_samples)
    _emit(rep, args.out)
    return analysis.exit_code([rep])


def _run_case(task):
    case, family_scale, seed, samples = task
    return analysis.case_report(case, gio.from_case(case), family_scale, seed, samples)


def cmd_gallery(args):
    case = gallery.build(args.name, args.params)
    gf = gio.from_case(case)
    if args.write:
        gio.dump(gf, args.write)
    rep = _run_case((case, args.family_scale, args.seed, args.hr_samples))
    _emit(rep, args.out)
    return analysis.exit_code([rep])


def _fuzz_task(task):
    n, gens, seed, family_scale = task
    return analysis.fuzz_case(n, gens, seed, family_scale)


def _fuzz(n, count, seed, generators, family_scale, jobs):
    seeds = analysis.fuzz_seeds(seed, count)
    results = _map(_fuzz_task, [(n, generators, s, family_scale) for s in seeds], jobs)
    rep = analysis.summarize_fuzz(n, count, seed, results)
    rep["cases"] = results
    return rep


def cmd_fuzz(args):
    rep = _fuzz(args.n, args.count, args.seed, args.generators, args.family_scale, args.jobs)
    _emit(rep, args.out)
    return analysis.exit_code([rep])


def cmd_verify_all(args):
    cases = gallery.standard_cases()
    reports = _map(_run_case, [(c, args.family_scale, args.seed, args.hr_samples) for c in cases], args.jobs)
    fuzz = {str(n): _fuzz(n, args.count, args.seed, 2, args.family_scale, args.jobs) for n in (2, 3, 4)}
    oracles = analysis.oracle_report(args.seed)
    parts = reports + list(fuzz.values()) + [oracles]
    rep = {
        "gallery": {r["case"]: {"violations": r["violations"], "undetermined": r["undetermined"],
                                "expected": r["expected"]} for r in reports},
        "fuzz": {n: {"summary": f["summary"], "violations": f["violations"], "undetermined": f["undetermined"],
                     "sharpness_search": f["sharpness_search"]} for n, f in fuzz.items()},
        "oracles": oracles,
    }
    code = analysis.exit_code(parts)
    rep["exit_code"] = code
    _emit(rep, args.out)
    return code


def build_parser():
    parser = argparse.ArgumentParser(prog="unitorus", description="Unipotent automorphism groups of complex tori.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, jobs=False):
        p.add_argument("--seed", type=int, default=0, help="seed for sampled checks (default 0)")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--family-scale", type=_scale, default=DEFAULT_FAMILY_SCALE,
                       help="perturbation size s of the Kähler family I + s*S (default 1/2)")
        p.add_argument("--hr-samples", type=int, default=20, help="random Kähler tuples per level")
        if jobs:
            p.add_argument("--jobs", type=int, default=1, help="worker processes (output is identical)")

    p = sub.add_parser("analyze-group", help="unipotence, class and derived length")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_analyze_group)

    p = sub.add_parser("growth", help="growth exponents on H^{p,q}")
    p.add_argument("file")
    p.add_argument("--pq", type=_pq, default="all", help="'all' or 'p,q'")
    p.add_argument("--samples", type=int, default=0, help="number of m = 2^k points for a fitted slope (0 or >= 2)")
    p.add_argument("--max-word-len", type=int, default=1, help="also analyze positive words up to this length")
    p.add_argument("--csv", help="write the exponent table as CSV")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_growth)

    p = sub.add_parser("decompose", help="invariant chain, filtration and s-sequences")
    p.add_argument("file")
    p.add_argument("--generator", type=int, help="use the cyclic group of this generator")
    common(p)
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("gallery", help="build a named example, optionally write it, and run all checks")
    p.add_argument("name", choices=sorted(gallery.BUILDERS))
    p.add_argument("params", nargs="*")
    p.add_argument("--write", help="write the group file here")
    common(p)
    p.set_defaults(fn=cmd_gallery)

    p = sub.add_parser("fuzz", help="invariant suites over random unipotent groups")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--generators", type=int, default=2)
    common(p, jobs=True)
    p.set_defaults(fn=cmd_fuzz)

    p = sub.add_parser("verify-all", help="gallery, fuzz and oracle checks")
    p.add_argument("--count", type=int, default=10, help="fuzz cases per dimension")
    common(p, jobs=True)
    p.set_defaults(fn=cmd_verify_all)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "samples", 0) == 1:
        parser.error("--samples must be 0 or at least 2")
    try:
        return args.fn(args)
    except ParseError as exc:
        _emit({"error": "ParseError", "message": str(exc), "issues": exc.issues})
        return EXIT_PARSE
    except OSError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc), "issues": []})
        return EXIT_PARSE
    except BadParameters as exc:
        _emit({"error": "BadParameters", "message": str(exc)})
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
