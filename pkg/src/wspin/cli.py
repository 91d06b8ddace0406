"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 domain/degeneracy error, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import elim, orbicurve, quasihom, radial
from .errors import DomainError, InputError, UnsupportedArity, WSpinError
from .polyparse import format_rational, parse_poly
from .serialize import dumps, to_jsonable

EXIT_OK, EXIT_INPUT, EXIT_DOMAIN, EXIT_NUMERIC = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _tol(args):
    if args.tol is not None:
        return args.tol
    return float(os.environ.get("WSPIN_DEFAULT_TOL", radial.DEFAULT_TOL))


def _emit(args, payload, text=None, csv_text=None):
    fmt = args.format or getattr(args, "default_format", "json")
    if fmt == "csv" and csv_text is not None:
        out = csv_text
    elif fmt == "text" and text is not None:
        out = text
    else:
        out = dumps(payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _text_lines(payload):
    return "".join(f"{k}: {json.dumps(to_jsonable(v))}\n" for k, v in payload.items())


# commands ---------------------------------------------------------------------


def analyze_report(poly_text, seed=0):
    P = parse_poly(poly_text)
    w = quasihom.growth_exponents(P)
    nd = quasihom.check_nondegenerate(P, seed=seed)
    ranges = quasihom.compactness_ranges(P)
    try:
        order = len(quasihom.symmetry_group(P))
    except DomainError:
        order = None
    return {
        "poly": str(P),
        "variables": list(P.variables),
        "q": w.q,
        "d": w.d,
        "k": w.k,
        "delta": w.delta,
        "delta_i": w.delta_i,
        "delta0": w.delta0,
        "kappa_i": w.kappa_i,
        "lp1_sup": w.lp1_range_sup,
        "lp_sup": w.lp_range_sup,
        "inner_compactness": ranges.inner_compactness,
        "strong_weak_compactness": ranges.strong_weak_compactness,
        "group_order": order,
        "nondegenerate": nd.nondegenerate,
        "isolated_singularity": nd.isolated_singularity,
        "method": nd.method,
        "witness": nd.witness,
    }


def cmd_analyze(args):
    report = analyze_report(args.poly, args.seed)
    _emit(args, report, _text_lines(report))
    if report["isolated_singularity"] == "refuted":
        print(f"degenerate: gradient vanishes at {to_jsonable(report['witness'])}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def cmd_group(args):
    P = parse_poly(args.poly)
    group = quasihom.symmetry_group(P)
    payload = {"poly": str(P), "order": len(group), "elements": group}
    text = "".join(" ".join(format_rational(x) for x in h.a) + "\n" for h in group)
    _emit(args, payload, text)
    return EXIT_OK


def curve_report(data, p=None):
    spec = orbicurve.curve_spec_from_json(data)
    cls = orbicurve.classify_marks(spec)
    degrees = orbicurve.bundle_degrees(spec)
    names = spec.poly.variables
    marks = []
    for l, mark in enumerate(spec.marks):
        marks.append({
            "label": mark.label,
            "phases": mark.phases,
            "c": cls.c[l],
            "ramond": dict(zip(names, cls.ramond[l])),
            "monomial_ramond": list(cls.monomial_ramond[l]),
        })
    report = {
        "genus": spec.genus,
        "superpotential": str(spec.poly),
        "q": spec.weights.q,
        "marks": marks,
        "degrees": degrees.deg,
        "admissible": degrees.admissible,
        "has_ramond_monomial": bool(cls.ramond_marks()),
    }
    if p is not None:
        report["p"] = Fraction(p)
        shifts, fred = {}, {}
        for j, name in enumerate(names):
            fw = orbicurve.fredholm_weights(spec, j, p)
            fred[name] = {"kappa": fw.kappa, "condition_i": fw.condition_i,
                          "condition_ii": fw.condition_ii, "fredholm": fw.fredholm}
            try:
                shifts[name] = orbicurve.index_shift(spec, j, p)
            except DomainError:
                shifts[name] = None
        report["fredholm"] = fred
        report["index_shift"] = shifts
    return report


def cmd_curve(args):
    try:
        with open(args.spec_file, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read curve spec: {exc}") from exc
    p = orbicurve.parse_rational(args.p) if args.p is not None else None
    report = curve_report(data, p)
    _emit(args, report, _text_lines(report))
    return EXIT_OK


def cmd_eliminate(args):
    P = parse_poly(args.poly)
    if args.var not in P.variables:
        raise InputError(f"{args.var!r} is not a variable of {P}")
    p = elim.elimination_poly(P, args.var)
    payload = {
        "poly": str(P),
        "variable": args.var,
        "elimination_poly": p.format_in(args.var),
        "degree": p.degree(args.var),
        "leading_coefficient": p.leading_coefficient(args.var).constant_value(),
    }
    _emit(args, payload, payload["elimination_poly"] + "\n")
    return EXIT_OK


def _parse_complex_list(text, n):
    try:
        values = [complex(x.strip().replace("i", "j")) for x in text.split(",")]
    except ValueError as exc:
        raise InputError(f"cannot parse --s {text!r}") from exc
    if len(values) != n:
        raise InputError(f"--s needs {n} comma-separated values")
    return values


def cmd_bound(args):
    P = parse_poly(args.poly)
    payload = {"poly": str(P)}
    if args.empirical:
        emp = elim.empirical_bound(P, sample_count=args.samples, seed=args.seed)
        payload["empirical"] = {
            "radii": emp.radii,
            "sup_ratio": emp.suprema[-1],
            "growth": emp.growth[-1],
            "stabilized": dict(zip(P.variables, emp.stabilized)),
            "verdict": "bounded" if emp.all_stabilized else "unbounded",
            "seed": args.seed,
            "samples": args.samples,
        }
    if args.s is not None or not args.empirical:
        if P.nvars > 2:
            raise UnsupportedArity("certified bounds need at most 2 variables; use --empirical")
        s = _parse_complex_list(args.s or ",".join(["0"] * P.nvars), P.nvars)
        gb = elim.gradient_bound(P, s)
        payload["certified"] = {
            "s": gb.s,
            "delta_i": gb.delta_i,
            "D": dict(zip(P.variables, gb.radii)),
            "C": dict(zip(P.variables, gb.constants)),
            "elimination_poly": {v: p.format_in(v) for v, p in zip(P.variables, gb.polynomials)},
        }
    _emit(args, payload, _text_lines(payload))
    return EXIT_OK


def _grid(args):
    return radial.default_grid(args.rho_min, args.rho_max, args.points)


def cmd_solve(args):
    tol = _tol(args)
    if args.r < 3:
        raise InputError(f"r must be >= 3 (A_1 excluded), got {args.r}")
    rho = _grid(args)
    profile = radial.make_profile(args.r, "global", args.u0, rho, tol)
    check = radial.identity_check(args.r, args.u0, tol)
    window = (rho >= 0.1) & (rho <= 10)
    gap = None
    if window.any():
        sing = radial.singular_limit(args.r, rho[window], tol)
        gap = float(np.max(np.abs(profile.u[window] - sing) / sing))
    check["singular_gap"] = gap
    check["max_rel_err"] = args.max_rel_err
    if args.csv_out:
        with open(args.csv_out, "w", encoding="utf-8") as fh:
            fh.write(profile.to_csv())
    _emit(args, check, _text_lines(check), profile.to_csv())
    if not check["rel_err"] <= args.max_rel_err:
        print(f"identity check failed: rel_err {check['rel_err']:.3g}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_profile(args):
    tol = _tol(args)
    param = args.param if args.family != "singular" else None
    profile = radial.make_profile(args.r, args.family, param, _grid(args), tol)
    payload = {
        "r": args.r,
        "family": args.family,
        "parameter": param,
        "rho": profile.rho,
        "u_tilde": profile.u,
        "u_norm": profile.u_norm,
    }
    _emit(args, payload, csv_text=profile.to_csv())
    return EXIT_OK


def cmd_identity(args):
    tol = _tol(args)
    rows = [radial.identity_check(r, u0, tol) for r in args.r for u0 in args.u0]
    _emit(args, rows)
    worst = max(row["rel_err"] for row in rows)
    return EXIT_NUMERIC if worst > args.max_rel_err else EXIT_OK


# parser -----------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default=None,
                        help="output format (default: csv for profile, json otherwise)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=None,
                        help="quadrature tolerance (default: $WSPIN_DEFAULT_TOL or 1e-10)")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    parser = _Parser(prog="wspin", description="W-spin equation toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", parents=[common], help="weights, exponents and ranges")
    p.add_argument("poly")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("group", parents=[common], help="diagonal symmetry group")
    p.add_argument("poly")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("curve", parents=[common], help="W-spin structure on a marked curve")
    p.add_argument("spec_file")
    p.add_argument("--p", default=None, help="Sobolev exponent for the Fredholm report, e.g. 5/2")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("eliminate", parents=[common], help="elimination polynomial p_i")
    p.add_argument("poly")
    p.add_argument("var")
    p.set_defaults(func=cmd_eliminate)

    p = sub.add_parser("bound", parents=[common], help="gradient bound")
    p.add_argument("poly")
    p.add_argument("--s", default=None, help="comma-separated gradient values, e.g. 1,0 or 1+2j,0")
    p.add_argument("--empirical", action="store_true")
    p.add_argument("--samples", type=int, default=20000)
    p.set_defaults(func=cmd_bound)

    def grid_flags(p):
        p.add_argument("--rho-min", type=float, default=1e-8)
        p.add_argument("--rho-max", type=float, default=1e4)
        p.add_argument("--points", type=int, default=1201)

    p = sub.add_parser("solve", parents=[common], help="sphere solution and identity check")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--u0", type=float, required=True)
    p.add_argument("--max-rel-err", type=float, default=1e-6)
    p.add_argument("--csv-out", default=None, help="also write the profile CSV here")
    grid_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("profile", parents=[common], help="sampled radial profile")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--family", choices=("local", "global", "singular"), default="global")
    p.add_argument("--param", type=float, default=1.0, help="C (local) or u0 (global)")
    grid_flags(p)
    p.set_defaults(func=cmd_profile, default_format="csv")

    p = sub.add_parser("identity", parents=[common], help="residue-energy identity table")
    p.add_argument("--r", type=int, nargs="+", default=[3, 4, 5, 7])
    p.add_argument("--u0", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    p.add_argument("--max-rel-err", type=float, default=1e-6)
    p.set_defaults(func=cmd_identity)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WSpinError as exc:
        print(f"wspin: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, ZeroDivisionError) as exc:
        print(f"wspin: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
