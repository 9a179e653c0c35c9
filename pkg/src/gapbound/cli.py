"""Command line entry point: ``gapbound <subcommand> [options]``.

Exit codes: 0 all checks passed, 1 usage or parse error, 2 a hypothesis
of the requested computation is not met, 3 an internal verification
failed (a bug; a dump goes to stderr).
"""
from __future__ import annotations

import argparse
import contextlib
import json
import sys

from . import __version__
from .algebra import RationalFunction, format_rational, to_rational
from .campaign import DEFAULT_FAMILY, CampaignConfig, campaign_csv, campaign_text, run_campaign
from .errors import InputError, NotNormalized, PolynomialInParameter, PreconditionError, VerificationFailure
from .expr import parse_function
from .gaps import extract_gaps, normalize_function, polynomial_in_x_check
from .report import build_document, render
from .series import expand_in_x, local_parameter_check

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_VERIFICATION = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _common(p: argparse.ArgumentParser, needs_f: bool = True, x_default="t") -> None:
    if needs_f:
        p.add_argument("--f", required=True, help="rational function of t")
    p.add_argument("--x", default=x_default, help=f"local parameter at the point (default: {x_default})")
    p.add_argument("--point", default="0", help="rational expansion point (default: 0)")
    p.add_argument("--order", type=int, default=64, help="series window N (default: 64)")
    p.add_argument("--normalize", action="store_true", help="analyze f / x^v_p(f) when v_p(f) != 0")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gapbound", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"gapbound {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _common(
        sub.add_parser("expand", help="print the expansion of f in powers of x (default: t - point)"),
        x_default=None,
    )
    _common(sub.add_parser("gaps", help="print the gap sequence of f in x"))
    _common(sub.add_parser("check-theorem", help="compare every gap exponent with the bound"))
    _common(sub.add_parser("check-corollary", help="bound check plus the support-count identity"))
    p = sub.add_parser("lemma2", help="build the auxiliary function F for one n")
    _common(p)
    p.add_argument("--n", type=int, default=3)
    p = sub.add_parser("check-prop", help="derivative valuation inequality at every relevant place")
    _common(p)
    p.add_argument("--n", type=int, default=5, help="largest derivative order")
    _common(sub.add_parser("check-rr", help="Riemann-Roch count for x"), needs_f=False)

    p = sub.add_parser("paper-example", help="the sharp family f = 1 + t^k / (1 - t^m)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--order", type=int, default=64)
    p.add_argument("--n", type=int, default=2, help="n for the auxiliary-function check")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p = sub.add_parser("campaign", help="randomized verification campaign")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-degree", type=int, default=6)
    p.add_argument("--coeff-bound", type=int, default=10)
    p.add_argument("--order", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--point", default="0")
    p.add_argument("--x", action="append", help="parameter expression (repeatable)")
    p.add_argument("--f", help="use this f in every trial instead of random draws")
    p.add_argument("--n", type=int, default=3, help="largest n for the auxiliary-function checks")
    p.add_argument("--prop-n", type=int, default=3)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    return parser


def _inputs(args):
    f = parse_function(args.f) if getattr(args, "f", None) else None
    x = parse_function(args.x) if args.x is not None else None
    try:
        point = to_rational(args.point)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad --point {args.point!r}") from exc
    if getattr(args, "order", 1) < 1:
        raise InputError("--order must be positive")
    return f, x, point


def _series_doc(f: RationalFunction, x: RationalFunction, point, order: int) -> dict:
    s = expand_in_x(f, x, point, order)
    return {
        "version": __version__,
        "f": f.to_string(),
        "x": x.to_string(),
        "point": format_rational(point),
        "order": order,
        "offset": s.offset,
        "terms": [{"k": k, "coefficient": format_rational(c)} for k, c in s.terms()],
    }


def cmd_expand(args) -> str:
    f, x, point = _inputs(args)
    if x is None:
        x = RationalFunction.t() - point
    doc = _series_doc(f, x, point, args.order)
    if args.format == "json":
        return json.dumps(doc, indent=2) + "\n"
    if args.format == "csv":
        return "k,coefficient\n" + "".join(f"{t['k']},{t['coefficient']}\n" for t in doc["terms"])
    body = " + ".join(f"({t['coefficient']})*x^{t['k']}" for t in doc["terms"]) or "0"
    return f"{body} + O(x^{args.order})\n"


def cmd_gaps(args) -> str:
    f, x, point = _inputs(args)
    local_parameter_check(x, point)
    if polynomial_in_x_check(f, x, point):
        raise PolynomialInParameter(f"{f} is a polynomial in x = {x}")
    g, v = normalize_function(f, x, point)
    if v and not args.normalize:
        raise NotNormalized(f"v_p(f) = {v} != 0; use --normalize")
    gaps = extract_gaps(expand_in_x(g, x, point, args.order))
    doc = {
        "version": __version__,
        "f": f.to_string(),
        "analyzed_f": g.to_string(),
        "normalized_by": v,
        "x": x.to_string(),
        "point": format_rational(point),
        "window": gaps.window,
        "exponents": list(gaps.exponents),
        "coefficients": [format_rational(c) for c in gaps.coefficients],
        "terminated": gaps.terminated,
    }
    if args.format == "json":
        return json.dumps(doc, indent=2) + "\n"
    if args.format == "csv":
        return "n,a_n,alpha_n\n" + "".join(
            f"{n},{a},{c}\n" for n, (a, c) in enumerate(zip(doc["exponents"], doc["coefficients"]))
        )
    lines = [f"{n:>5} {a:>6}  {c}" for n, (a, c) in enumerate(zip(doc["exponents"], doc["coefficients"]))]
    return "    n    a_n  alpha_n\n" + "\n".join(lines) + "\n"


def _document(args, **sections) -> str:
    f, x, point = _inputs(args)
    doc = build_document(f, x, point, args.order, normalize=getattr(args, "normalize", False), **sections)
    return render(doc, args.format)


def run_command(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cmd = args.command
        if cmd == "expand":
            text = cmd_expand(args)
        elif cmd == "gaps":
            text = cmd_gaps(args)
        elif cmd == "check-theorem":
            text = _document(args)
        elif cmd == "check-corollary":
            text = _document(args, rr=True)
        elif cmd == "lemma2":
            if args.n < 1:
                raise InputError("--n must be positive")
            text = _document(args, lemma2_n=args.n)
        elif cmd == "check-prop":
            if args.n < 0:
                raise InputError("--n must be non-negative")
            text = _document(args, bounds=False, prop_n=args.n)
        elif cmd == "check-rr":
            _, x, _ = _inputs(args)
            doc = build_document(None, x, to_rational(args.point), args.order, bounds=False, rr=True)
            text = render(doc, args.format)
        elif cmd == "paper-example":
            if not 1 <= args.m < args.k:
                raise InputError("the family needs positive integers k > m")
            f = parse_function(f"1 + t^{args.k}/(1 - t^{args.m})")
            doc = build_document(f, RationalFunction.t(), 0, args.order, lemma2_n=args.n, prop_n=2, rr=True)
            if not doc["is_sharp"]:
                raise VerificationFailure("the sharp family was not sharp", doc)
            text = render(doc, args.format)
        else:
            cfg = CampaignConfig(
                trials=args.trials,
                max_degree=args.max_degree,
                coeff_bound=args.coeff_bound,
                order=args.order,
                parameter_family=tuple(args.x) if args.x else DEFAULT_FAMILY,
                seed=args.seed,
                point=args.point,
                lemma_n=args.n,
                prop_n=args.prop_n,
                forced_f=args.f,
                workers=args.workers,
            )
            doc = run_campaign(cfg)
            if args.format == "json":
                text = json.dumps(doc, indent=2) + "\n"
            elif args.format == "csv":
                text = campaign_csv(doc)
            else:
                text = campaign_text(doc)
            out.write(text)
            if not doc["pass"]:
                print("campaign failures: " + json.dumps(doc["failures"]), file=err)
                return EXIT_VERIFICATION
            return EXIT_OK
    except InputError as exc:
        print(f"gapbound: error: {exc}", file=err)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"gapbound: {type(exc).__name__}: {exc}", file=err)
        return EXIT_PRECONDITION
    except VerificationFailure as exc:
        print(f"gapbound: INTERNAL VERIFICATION FAILURE: {exc}", file=err)
        print(json.dumps(exc.dump, indent=2, default=str), file=err)
        return EXIT_VERIFICATION
    out.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    return run_command(argv)
