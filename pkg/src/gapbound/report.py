"""Report documents for single verifications.

Documents are plain dicts of JSON-ready values. Rationals are written as
``"p/q"`` strings, never floats, so a document is an exact record of the
run and identical inputs always give byte-identical output.
"""
from __future__ import annotations

import csv
import io
import json
from typing import Optional

from . import __version__
from .algebra import RationalFunction, format_rational
from .errors import VerificationFailure
from .gaps import BoundReport, verify_bounds
from .lemmas import (
    check_height_decomposition,
    check_rr_identity,
    check_support_derivative,
    construct_auxiliary,
    derivative_valuation_sweep,
)

ROW_FIELDS = ("n", "a_n", "theorem_rhs", "corollary_rhs", "slack")


def _frac(value) -> Optional[str]:
    if value is None:
        return None
    return f"{value.numerator}/{value.denominator}"


def bound_section(report: BoundReport) -> dict:
    b = report.inputs
    doc = {
        "height": b.height_f,
        "s1_count": b.s1_count,
        "s2_count": b.s2_count,
        "s2_sum": b.s2_sum,
        "supp_x_count": b.supp_x_count,
        "genus": b.genus,
        "rows": [
            {
                "n": r.n,
                "a_n": r.a_n,
                "alpha_n": format_rational(r.alpha_n),
                "theorem_rhs": r.theorem_rhs,
                "corollary_rhs": r.corollary_rhs,
                "slack": r.slack,
            }
            for r in report.rows
        ],
        "max_n": report.max_n,
        "min_slack": report.min_slack,
        "max_slack": report.max_slack,
        "is_sharp": report.is_sharp,
        "limsup_estimate": _frac(report.limsup_estimate),
        "limsup_bound": report.limsup_bound,
    }
    if report.normalized_by:
        doc["analyzed_f"] = report.f.to_string()
        doc["normalized_by"] = report.normalized_by
    return doc


def lemma2_section(f, x, point, n, report: BoundReport) -> dict:
    res = construct_auxiliary(f, x, point, n, gaps=report.gaps, order=report.order)
    dec = check_height_decomposition(res.aux, f, x, n)
    return {
        "n": n,
        "c": list(res.aux.c),
        "F": res.aux.F.to_string(),
        "hF": res.aux.height_F,
        "v_pF": res.aux.achieved_valuation,
        "v_pF_series": res.aux.series_valuation,
        "a_n": res.aux.a_n,
        "theorem_rhs": res.theorem_rhs,
        "wronskian": format_rational(res.wronskian),
        "cases": {
            name: {"points": c.degree, "hF": c.height_F, "hf": c.height_f, "bound": c.bound, "holds": c.holds}
            for name, c in dec.cases.items()
        },
        "holds": res.holds and dec.holds,
    }


def prop_section(f, x, max_n: int) -> list:
    return [
        {"place": str(c.place), "n": c.n, "lhs": c.lhs, "rhs": c.rhs, "holds": c.holds}
        for c in derivative_valuation_sweep(f, x, max_n)
    ]


def rr_section(x) -> dict:
    rr = check_rr_identity(x)
    support = check_support_derivative(x)
    return {
        "lhs": rr.lhs_sum,
        "rhs": rr.rhs,
        "supp_x_count": rr.supp_count,
        "holds": rr.holds,
        "support_checks": [
            {"place": str(s.place), "v_x": s.v_x, "v_dxdxq": s.v_dxdxq, "holds": s.holds} for s in support
        ],
    }


def build_document(
    f: Optional[RationalFunction],
    x: RationalFunction,
    point=0,
    order: int = 64,
    normalize: bool = False,
    bounds: bool = True,
    lemma2_n: Optional[int] = None,
    prop_n: Optional[int] = None,
    rr: bool = False,
) -> dict:
    """Run the requested checks and collect them into one document.

    Raises ``VerificationFailure`` (with the document as dump) if any check
    that must hold did not.
    """
    doc = {
        "version": __version__,
        "f": f.to_string() if f is not None else None,
        "x": x.to_string(),
        "point": format_rational(point),
        "order": order,
    }
    report = None
    if bounds or lemma2_n:
        report = verify_bounds(f, x, point, order, normalize=normalize)
        doc.update(bound_section(report))
    analyzed = report.f if report is not None else f
    checks = [report.passed] if report is not None else []
    if lemma2_n:
        doc["lemma2"] = lemma2_section(analyzed, x, point, lemma2_n, report)
        checks.append(doc["lemma2"]["holds"])
    if prop_n is not None:
        doc["prop_checks"] = prop_section(analyzed, x, prop_n)
        checks.extend(c["holds"] for c in doc["prop_checks"])
    if rr:
        doc["rr_check"] = rr_section(x)
        checks.append(doc["rr_check"]["holds"])
        checks.extend(c["holds"] for c in doc["rr_check"]["support_checks"])
    doc["pass"] = all(checks)
    if not doc["pass"]:
        raise VerificationFailure("a check that must hold failed", doc)
    return doc


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False)


def to_csv(doc: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ROW_FIELDS)
    for row in doc.get("rows", []):
        writer.writerow([row[k] for k in ROW_FIELDS])
    return buf.getvalue()


def to_text(doc: dict) -> str:
    lines = [f"gapbound {doc['version']}"]
    if doc.get("f") is not None:
        lines.append(f"f     = {doc['f']}")
    if "analyzed_f" in doc:
        lines.append(f"analyzed f / x^{doc['normalized_by']} = {doc['analyzed_f']}")
    lines.append(f"x     = {doc['x']}")
    lines.append(f"point = {doc['point']}   order = {doc['order']}")
    if "rows" in doc:
        lines.append(
            f"h(f) = {doc['height']}   #S1 = {doc['s1_count']}   #S2 = {doc['s2_count']}   "
            f"S2 sum = {doc['s2_sum']}   #Supp(x) = {doc['supp_x_count']}"
        )
        lines.append(f"{'n':>5} {'a_n':>6} {'theorem':>8} {'corollary':>10} {'slack':>6}  alpha_n")
        for r in doc["rows"]:
            lines.append(
                f"{r['n']:>5} {r['a_n']:>6} {r['theorem_rhs']:>8} {r['corollary_rhs']:>10} {r['slack']:>6}  {r['alpha_n']}"
            )
        lines.append(
            f"checked n <= {doc['max_n']}; slack min {doc['min_slack']} max {doc['max_slack']}; "
            f"sharp: {doc['is_sharp']}; a_N/N = {doc['limsup_estimate']} (limsup bound {doc['limsup_bound']})"
        )
    if "lemma2" in doc:
        l2 = doc["lemma2"]
        lines.append(f"lemma 2, n = {l2['n']}: c = {l2['c']}")
        lines.append(f"  F = {l2['F']}")
        lines.append(f"  v_p(F) = {l2['v_pF']} (= a_n {l2['a_n']}), h(F) = {l2['hF']} <= {l2['theorem_rhs']}")
        for name, c in l2["cases"].items():
            lines.append(f"  {name}: {c['points']} points, h(F) part {c['hF']} <= {c['bound']}")
    if "prop_checks" in doc:
        bad = [c for c in doc["prop_checks"] if not c["holds"]]
        lines.append(f"derivative valuations: {len(doc['prop_checks'])} checks, {len(bad)} failures")
    if "rr_check" in doc:
        rr = doc["rr_check"]
        lines.append(f"Riemann-Roch count: {rr['lhs']} = #Supp(x) - 2 = {rr['rhs']}: {rr['holds']}")
    lines.append("PASS" if doc["pass"] else "FAIL")
    return "\n".join(lines) + "\n"


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(doc) + "\n"
    if fmt == "csv":
        return to_csv(doc)
    return to_text(doc)
