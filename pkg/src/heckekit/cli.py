"""
Command-line interface.

All structured output is JSON on stdout with sorted keys, so repeated
runs (including runs with different --threads) are byte-identical apart
from the "timings" section of certificate reports.  Diagnostics go to
stderr.  Exit codes:

    0  success / certificate verified
    1  certificate hypothesis fails (or validation checklist fails)
    2  malformed input or bad arguments
    3  internal consistency violation (inexact division, degree audit,
       pullback mismatch)
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import coxeter, demazure, hecke, spherical, subexpr, worddata
from .demazure import DegreeAuditFailure
from .laurent import InexactDivision
from .spherical import PullbackMismatch

THREADS_ENV = "HECKEKIT_THREADS"


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def emit(payload, pretty: bool = False) -> None:
    if pretty:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def parse_word(text: str) -> tuple[int, ...]:
    """Accept 's1 s2 s1', '1 2 1' or '1,2,1'."""
    tokens = text.replace(",", " ").split()
    out = []
    for t in tokens:
        if t.startswith("s"):
            t = t[1:]
        out.append(int(t))
    return tuple(out)


def parse_perm(text: str) -> tuple[int, ...]:
    p = tuple(int(t) for t in text.replace(",", " ").split())
    if not coxeter.is_permutation(p):
        raise ValueError(f"not a permutation in one-line notation: {text!r}")
    return p


def parse_parabolic(text: str | None) -> frozenset:
    if not text:
        return frozenset()
    return frozenset(parse_word(text))


def load_expression(source: str) -> tuple[demazure.DemazureExpr, str]:
    if source in demazure.BUILTIN_EXPRESSIONS:
        return demazure.builtin_expr(source), source
    path = Path(source)
    if path.exists():
        return demazure.parse_expr(path.read_text()), str(path)
    if "D" in source or "(" in source:
        return demazure.parse_expr(source), "<inline>"
    raise ValueError(f"unknown expression {source!r} (not a builtin, file, "
                     f"or inline prefix expression)")


def laurent_json(p) -> dict:
    return p.to_json_dict()


def _hist_json(hist: dict[int, int]) -> dict[str, int]:
    return {str(d): c for d, c in sorted(hist.items())}


# -- subcommand implementations -----------------------------------------


def cmd_kl(args) -> int:
    if args.element:
        x = coxeter.evaluate_word(parse_word(args.element), args.n)
    else:
        x = parse_perm(args.perm)
    el = hecke.kl_basis(x)
    emit({"element": list(x), "kl": el.to_json_dict(),
          "display": repr(el)}, args.pretty)
    return 0


def cmd_skl(args) -> int:
    A = parse_parabolic(args.parabolic)
    if args.element:
        x = coxeter.min_coset_rep(
            coxeter.evaluate_word(parse_word(args.element), args.n), A)
    else:
        x = parse_perm(args.perm)
    el = spherical.spherical_kl_basis(x, A)
    emit({"element": list(x), "skl": el.to_json_dict(),
          "display": repr(el)}, args.pretty)
    return 0


def cmd_bs(args) -> int:
    word = parse_word(args.word)
    if args.parabolic is None:
        el = hecke.bott_samelson_char(word, args.n)
        payload = {"module": "hecke", "bs": el.to_json_dict()}
    else:
        A = parse_parabolic(args.parabolic)
        el = spherical.bott_samelson_spherical(word, args.n, A)
        payload = {"module": "spherical", "bs": el.to_json_dict()}
    payload["display"] = repr(el)
    emit(payload, args.pretty)
    return 0


def cmd_pair(args) -> int:
    w1 = parse_word(args.word)
    w2 = parse_word(args.word2)
    if args.parabolic is None:
        a = hecke.bott_samelson_char(w1, args.n)
        b = hecke.bott_samelson_char(w2, args.n)
        value = hecke.pairing(a, b)
        module = "hecke"
    else:
        A = parse_parabolic(args.parabolic)
        a = spherical.bott_samelson_spherical(w1, args.n, A)
        b = spherical.bott_samelson_spherical(w2, args.n, A)
        value = spherical.spherical_pairing(a, b)
        module = "spherical"
    emit({"module": module, "pairing": laurent_json(value),
          "display": str(value)}, args.pretty)
    return 0


def _constraint_from_args(args, word) -> subexpr.EnumConstraint | None:
    if getattr(args, "forced_letters", None):
        letters = parse_parabolic(args.forced_letters)
        return subexpr.EnumConstraint.forced_letters(word, letters)
    return None


def cmd_deodhar(args) -> int:
    word = parse_word(args.word)
    A = parse_parabolic(args.parabolic)
    constraint = _constraint_from_args(args, word)
    el = spherical.deodhar_expand(word, args.n, A, constraint, args.threads)
    leaves = (constraint or subexpr.EnumConstraint.free(len(word))).leaf_count()
    emit({"expansion": el.to_json_dict(), "subexpressions": leaves,
          "display": repr(el)}, args.pretty)
    return 0


def cmd_defect_stats(args) -> int:
    word = parse_word(args.word)
    A = parse_parabolic(args.parabolic)
    constraint = _constraint_from_args(args, word)
    target = parse_perm(args.endpoint) if args.endpoint else None
    hist = subexpr.defect_histogram(word, args.n, A, constraint, target,
                                    args.threads)
    emit(_hist_json(hist), args.pretty)
    return 0


def cmd_demazure_eval(args) -> int:
    expr, name = load_expression(args.expr)
    val = demazure.eval_expr(expr, erase=args.erase)
    emit({"expression": name, "erase": args.erase,
          "value": val.to_json_dict(), "display": repr(val)}, args.pretty)
    return 0


def cmd_intersection_form(args) -> int:
    expr, name = load_expression(args.expr)
    report = demazure.intersection_vector(expr, args.p)
    payload = report.to_json_dict()
    payload["expression"] = name
    emit(payload, args.pretty)
    return 0


def cmd_perverse_check(args) -> int:
    word = parse_word(args.word)
    if args.parabolic is None:
        rep = hecke.is_perverse_character(
            hecke.bott_samelson_char(word, args.n))
    else:
        rep = spherical.is_perverse_spherical(
            spherical.bott_samelson_spherical(
                word, args.n, parse_parabolic(args.parabolic)))
    emit({
        "perverse": rep.is_perverse,
        "expansion": {",".join(map(str, x)): c.to_json_dict()
                      for x, c in sorted(rep.expansion.items())},
    }, args.pretty)
    return 0


def cmd_validate_word(args) -> int:
    wd = worddata.load_word_data(args.word)
    report = worddata.validate_word_data(wd)
    payload = report.to_json_dict()
    payload["source"] = wd.source
    emit(payload, args.pretty)
    return 0 if (report.ok and report.complete) else 1


def cmd_certify(args) -> int:
    timings: dict[str, float] = {}
    t0 = time.perf_counter()

    expr, expr_name = load_expression(args.expr)
    form = demazure.intersection_vector(expr, args.p)
    timings["intersection_form_seconds"] = round(time.perf_counter() - t0, 6)
    rank_ok = form.rank_over_Q == 1 and form.rank_over_p == 0

    payload = {
        "expression": {"name": expr_name,
                       "operators": demazure.op_count(expr)},
        "p": args.p,
        "intersection_form": form.to_json_dict(),
        "rank_conditions": {
            "rank_Q": form.rank_over_Q,
            "rank_p": form.rank_over_p,
            "ok": rank_ok,
        },
    }

    interval_ok = False
    if args.word is None:
        payload["word"] = None
        payload["histogram"] = None
        payload["histogram_at_x"] = None
        payload["interval"] = {"status": "skipped: no word data"}
    else:
        wd = worddata.load_word_data(args.word)
        report = worddata.validate_word_data(wd)
        if wd.word is None:
            payload["word"] = {"source": wd.source,
                               "validation": report.to_json_dict()}
            payload["histogram"] = None
            payload["histogram_at_x"] = None
            payload["interval"] = {
                "status": "skipped: word data incomplete"}
        elif not report.ok or not report.complete:
            raise ValueError(
                f"word data {wd.source} fails validation: "
                + "; ".join(f"{c.name}: {c.detail}"
                            for c in report.checks if not c.ok))
        else:
            x = coxeter.min_coset_rep(wd.x_element(), wd.parabolic)
            w = wd.w_element()
            constraint = wd.constraint()
            t1 = time.perf_counter()
            data = subexpr.sweep_parallel(wd.word, wd.n, wd.parabolic,
                                          constraint, args.threads)
            timings["enumeration_seconds"] = round(
                time.perf_counter() - t1, 6)
            expansion = spherical.expansion_from_sweep(
                data, wd.n, wd.parabolic)
            total_hist: dict[int, int] = {}
            for hist in data.values():
                for d, c in hist.items():
                    total_hist[d] = total_hist.get(d, 0) + c
            t2 = time.perf_counter()
            interval = spherical.interval_condition_check(expansion, x, w)
            timings["interval_seconds"] = round(time.perf_counter() - t2, 6)
            interval_ok = interval.passed
            payload["word"] = {
                "source": wd.source,
                "n": wd.n,
                "length": len(wd.word),
                "A": sorted(wd.parabolic),
                "B": sorted(wd.lower),
                "degree": wd.degree,
                "x": list(x),
                "w": list(w),
                "free_positions": len(constraint.free_positions()),
                "subexpressions": constraint.leaf_count(),
                "validation": report.to_json_dict(),
            }
            payload["histogram"] = _hist_json(total_hist)
            payload["histogram_at_x"] = _hist_json(data.get(x, {}))
            payload["interval"] = {
                "status": "ok" if interval.passed else "failed",
                "passed": interval.passed,
                "cosets_in_interval": len(interval.entries),
                "cosets_outside": interval.outside,
                "entries": [
                    {"coset": list(e.coset),
                     "coefficient": laurent_json(e.coefficient),
                     "ok": e.ok}
                    for e in interval.entries
                ],
                "failures": [
                    {"coset": list(e.coset),
                     "coefficient": laurent_json(e.coefficient)}
                    for e in interval.failures()
                ],
            }

    verdict = rank_ok and interval_ok
    payload["verdict"] = verdict
    timings["total_seconds"] = round(time.perf_counter() - t0, 6)
    timings["threads"] = args.threads
    payload["timings"] = timings
    emit(payload, args.pretty)
    return 0 if verdict else 1


# -- argument parsing ----------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heckekit",
        description="Exact Hecke-algebra workbench and non-perversity "
                    "certificate checker.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, n=True):
        if n:
            p.add_argument("--n", type=int, required=True,
                           help="rank of the symmetric group S_n")
        p.add_argument("--pretty", action="store_true",
                       help="indented JSON output")

    p = sub.add_parser("kl", help="Kazhdan-Lusztig basis element")
    common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--element", help="a word for the element, e.g. 's1 s2 s1'")
    g.add_argument("--perm", help="one-line notation, e.g. '3,2,1'")
    p.set_defaults(func=cmd_kl)

    p = sub.add_parser("skl", help="spherical Kazhdan-Lusztig basis element")
    common(p)
    p.add_argument("--parabolic", required=True,
                   help="the subset A, e.g. '2' or 's1 s2'")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--element", help="a word; its minimal coset rep is used")
    g.add_argument("--perm", help="one-line notation (must be a minimal rep)")
    p.set_defaults(func=cmd_skl)

    p = sub.add_parser("bs", help="Bott-Samelson character in H or M")
    common(p)
    p.add_argument("--word", required=True)
    p.add_argument("--parabolic",
                   help="if given, compute in the spherical module")
    p.set_defaults(func=cmd_bs)

    p = sub.add_parser("pair", help="pairing of two Bott-Samelson characters")
    common(p)
    p.add_argument("--word", required=True)
    p.add_argument("--word2", required=True)
    p.add_argument("--parabolic",
                   help="if given, use the spherical pairing")
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("deodhar", help="Deodhar expansion of a word")
    common(p)
    p.add_argument("--parabolic", default="")
    p.add_argument("--word", required=True)
    p.add_argument("--forced-letters",
                   help="letters whose positions are forced to 1")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=cmd_deodhar)

    p = sub.add_parser("defect-stats", help="defect histogram of a word")
    common(p)
    p.add_argument("--parabolic", default="")
    p.add_argument("--word", required=True)
    p.add_argument("--forced-letters")
    p.add_argument("--endpoint",
                   help="count only this endpoint (one-line notation)")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=cmd_defect_stats)

    p = sub.add_parser("demazure-eval",
                       help="evaluate a nested Demazure expression")
    common(p, n=False)
    p.add_argument("--expr", required=True,
                   help="builtin name, file path, or inline prefix text")
    p.add_argument("--erase", type=int,
                   help="treat this operator (prefix order, 1-based) as id")
    p.set_defaults(func=cmd_demazure_eval)

    p = sub.add_parser("intersection-form",
                       help="erasure vector and its ranks")
    common(p, n=False)
    p.add_argument("--expr", default="paper-GL15")
    p.add_argument("--p", type=int, default=2)
    p.set_defaults(func=cmd_intersection_form)

    p = sub.add_parser("perverse-check",
                       help="is a Bott-Samelson character perverse?")
    common(p)
    p.add_argument("--word", required=True)
    p.add_argument("--parabolic")
    p.set_defaults(func=cmd_perverse_check)

    p = sub.add_parser("validate-word",
                       help="check a word-data file against its census")
    common(p, n=False)
    p.add_argument("--word", required=True,
                   help="path or builtin name "
                        f"({', '.join(sorted(worddata.BUILTIN_WORDS))})")
    p.set_defaults(func=cmd_validate_word)

    p = sub.add_parser("certify", help="run the non-perversity certificate")
    common(p, n=False)
    p.add_argument("--word",
                   help="word-data file (path or builtin name); without it "
                        "the interval section is skipped")
    p.add_argument("--expr", default="paper-GL15")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=cmd_certify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InexactDivision, DegreeAuditFailure, PullbackMismatch) as exc:
        print(f"heckekit: internal consistency violation: {exc}",
              file=sys.stderr)
        return 3
    except (ValueError, TypeError, IndexError, OSError,
            json.JSONDecodeError, KeyError) as exc:
        print(f"heckekit: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
