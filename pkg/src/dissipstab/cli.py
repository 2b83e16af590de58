"""Command-line front end.

Exit codes: the ``stability`` verdict maps to 0 (asymptotically stable),
1 (unstable), 2 (marginal); usage errors exit 64, config parse errors 65,
and the sweep-size guard 66.  All numeric output uses 17 significant
digits so identical invocations are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__, models
from .hurwitz import classify, hurwitz_H, surface_V_sample
from .krein import collision_scan
from .msystem import QuarticPoly
from .paradox import NoOnsetFound, vanishing_damping_scan
from .smallalg import Poly, poly_roots
from .sweep import (
    ConfigError,
    GuardExceeded,
    format_value,
    load_spec,
    result_to_csv,
    result_to_json,
    run_sweep,
)
from .umbrella import AffineConstraint, abscissa_min_affine

EX_USAGE = 64
EX_CONFIG = 65
EX_GUARD = 66


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(header, rows):
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def _table_text(header, rows, fmt, extra=None):
    if fmt == "json":
        doc = {"header": list(header), "rows": [list(r) for r in rows]}
        if extra:
            doc.update(extra)
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    return _csv_text(header, rows)


def _parse_kv(pairs):
    params = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise UsageError(f"expected key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        try:
            params[key] = float(value)
        except ValueError:
            params[key] = value
    return params


def cmd_stability(args) -> int:
    q = QuarticPoly(args.a1, args.a2, args.a3, args.a4)
    verdict = classify(q, tol=args.tol)
    lines = [
        f"verdict: {verdict.stability}",
        f"certificate: {verdict.certificate}",
        f"H: {format_value(hurwitz_H(q))}",
        f"abscissa: {format_value(verdict.abscissa)}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return verdict.exit_code


def cmd_roots(args) -> int:
    coeffs = list(reversed(args.coeffs))  # input in descending powers
    clusters = poly_roots(Poly(coeffs), tol=args.tol)
    rows = [(r.real, r.imag, m) for r, m in clusters]
    _emit(_table_text(("root_re", "root_im", "multiplicity"), rows, args.format), args.out)
    return 0


def cmd_sweep(args) -> int:
    spec = load_spec(args.config)
    threads = args.threads or int(os.environ.get("DISSIPSTAB_THREADS", "1"))
    result = run_sweep(spec, threads=threads)
    text = result_to_json(result) if args.format == "json" else result_to_csv(result)
    _emit(text, args.out)
    return 0


def cmd_surface(args) -> int:
    points = surface_V_sample(
        (args.m_min, args.m_max), (args.a1_min, args.a1_max), (args.m_count, args.a1_count)
    )
    rows = [
        (p.a1, p.a2, p.a3, hurwitz_H(QuarticPoly(p.a1, p.a2, p.a3, 1.0)), int(p.on_double_line))
        for p in points
    ]
    _emit(_table_text(("a1", "a2", "a3", "H", "double_line"), rows, args.format), args.out)
    return 0


_PARADOX_MODELS = {
    "ziegler": (models.ziegler_family, (1.0, 2.4)),
    "maclaurin-viscous": (models.maclaurin_family, (0.7, 0.999)),
}


def cmd_paradox(args) -> int:
    if args.model not in _PARADOX_MODELS:
        raise UsageError(
            f"model {args.model!r} has no damping scale; choose from {sorted(_PARADOX_MODELS)}"
        )
    family_builder, default_range = _PARADOX_MODELS[args.model]
    lo = args.load_min if args.load_min is not None else default_range[0]
    hi = args.load_max if args.load_max is not None else default_range[1]
    eps_list = [float(x) for x in args.eps.split(",")]
    scan = vanishing_damping_scan(family_builder(), (lo, hi), eps_list)
    rows = [(eps, onset) for eps, onset in scan.rows]
    extra = {
        "limit": scan.limit,
        "raw_limit": scan.raw_limit,
        "undamped_onset": scan.undamped_onset,
        "gap": scan.gap,
        "warnings": list(scan.warnings),
    }
    if args.format == "json":
        _emit(_table_text(("eps", "onset"), rows, "json", extra), args.out)
    else:
        text = _csv_text(("eps", "onset"), rows)
        text += "\n".join(
            [
                f"# limit,{format_value(scan.limit)}",
                f"# undamped_onset,{format_value(scan.undamped_onset)}",
                f"# gap,{format_value(scan.gap)}",
            ]
        ) + "\n"
        _emit(text, args.out)
    return 0


def cmd_krein_path(args) -> int:
    if args.model == "sobolev":
        params = models.SobolevParams(
            a=args.a, rho=args.rho, Omega=args.Omega_spin
        )
        family = models.sobolev_family(params)
    elif args.model == "maclaurin":
        family = models.maclaurin_krein_family()
    else:
        raise UsageError("krein-path models: sobolev, maclaurin")
    grid = np.linspace(args.start, args.stop, args.count)
    path, events = collision_scan(family, grid, args.param_name, tol=args.tol)
    n = max(len(pt.entries) for pt in path.points)
    header = [args.param_name]
    for k in range(n):
        header += [f"lam{k + 1}_re", f"lam{k + 1}_im", f"sign{k + 1}", f"mult{k + 1}"]
    rows = []
    for pt in path.points:
        row = [pt.parameter]
        for entry in pt.entries:
            row += [
                entry.value.real,
                entry.value.imag,
                entry.krein_sign,
                entry.algebraic_multiplicity,
            ]
        row += [""] * (len(header) - len(row))
        rows.append(tuple(row))
    extra = {
        "events": [
            {
                "bracket": list(ev.bracket),
                "value_re": ev.value.real,
                "value_im": ev.value.imag,
                "kind": ev.kind,
                "signs": list(ev.signs),
            }
            for ev in events
        ]
    }
    if args.format == "json":
        _emit(_table_text(header, rows, "json", extra), args.out)
    else:
        text = _csv_text(header, rows)
        for ev in events:
            text += (
                f"# collision,{format_value(ev.bracket[0])},{format_value(ev.bracket[1])},"
                f"{format_value(ev.value.real)},{format_value(ev.value.imag)},{ev.kind}\n"
            )
        _emit(text, args.out)
    return 0


def cmd_abscissa_min(args) -> int:
    b = [float(x) for x in args.constraint.split(",")]
    if len(b) != args.n + 1:
        raise UsageError(f"constraint needs n+1 = {args.n + 1} values b0..bn")
    try:
        constraint = AffineConstraint(tuple(b))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    res = abscissa_min_affine(constraint, field=args.field)
    lines = [
        f"a_star: {format_value(res.a_star)}",
        f"attained: {res.attained}",
    ]
    if res.p_star is not None:
        coeffs = ", ".join(format_value(float(c.real)) for c in res.p_star.coeffs)
        lines.append(f"p_star_coeffs_ascending: {coeffs}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_model_info(args) -> int:
    params = _parse_kv(args.set)
    lines = [f"model: {args.model}"]
    if args.model == "ziegler":
        p = models.ZieglerParams(
            m=params.get("m", 1.0),
            c=params.get("c", 1.0),
            l=params.get("l", 1.0),
            P=params.get("P", 0.0),
            b=params.get("b", 0.0),
        )
        pk, pk_damped, pk_limit = models.ziegler_criticals(p)
        lines += [
            f"P_critical_undamped: {format_value(pk)}",
            f"P_critical_damped(b={format_value(p.b)}): {format_value(pk_damped)}",
            f"P_critical_vanishing_damping: {format_value(pk_limit)}",
        ]
    elif args.model == "brouwer":
        p = models.BrouwerParams(
            g=params.get("g", 1.0),
            k1=params.get("k1", 1.0),
            k2=params.get("k2", 1.0),
            omega=params.get("omega", 0.0),
            c1=params.get("c1", 0.0),
            c2=params.get("c2", 0.0),
        )
        if p.c1 == 0.0 and p.c2 == 0.0:
            verdict = models.brouwer_undamped_verdict(p)
            lines += [
                f"case: {verdict.case}",
                f"stable: {verdict.stable}",
            ]
            if verdict.window:
                lines.append(
                    "omega_sq_window: "
                    f"{format_value(verdict.window[0])}..{format_value(verdict.window[1])}"
                )
        else:
            from .msystem import char_quartic

            verdict = classify(char_quartic(models.build_brouwer(p)))
            lines += [f"verdict: {verdict.stability}", f"certificate: {verdict.certificate}"]
    elif args.model == "lagrange":
        mu = params.get("mu", 0.0)
        p, gascheau = models.lagrange_point_params(mu)
        lines += [
            f"g_k1: {format_value(p.k1)}",
            f"g_k2: {format_value(p.k2)}",
            f"gascheau: {format_value(gascheau)}",
            f"stable: {gascheau > 0}",
            f"critical_mass_ratio: {format_value(models.GASCHEAU_CRITICAL_RATIO)}",
        ]
    elif args.model == "maclaurin":
        e_secular, e_dynamical = models.maclaurin_criticals()
        lines += [
            f"e_secular: {format_value(e_secular)}",
            f"e_dynamical: {format_value(e_dynamical)}",
        ]
        if "e" in params:
            om2, b = models.maclaurin_profile(params["e"])
            lines += [
                f"Omega_sq: {format_value(om2)}",
                f"b: {format_value(b)}",
            ]
    elif args.model == "sobolev":
        p = models.SobolevParams(
            a=params.get("a", 1.0),
            c=params.get("c", 2.0),
            rho=params.get("rho", 1.0),
            Omega=params.get("Omega", 1.0),
        )
        lo, hi = models.greenhill_band(p.a)
        lines += [
            f"L: {format_value(p.L)}",
            f"band: {format_value(lo)}..{format_value(hi)}",
        ]
        lam = models.sobolev_massless_spectrum(p.a, p.c) if p.c != p.a else ()
        for k, v in enumerate(lam):
            lines.append(f"lambda{k + 1}: {format_value(v.real)}{v.imag:+.17g}j")
    elif args.model == "combres":
        p = models.CombResParams(
            Omega=params.get("Omega", 0.5),
            eps=params.get("eps", 0.0),
            mu=params.get("mu", 0.0),
        )
        lines += [
            f"omega1: {format_value(p.omega1)}",
            f"omega2: {format_value(p.omega2)}",
            f"omega_sum: {format_value(p.omega_sum)}",
        ]
        try:
            iv = models.combres_interval(p.mu, p.omega_sum)
            lines += [
                f"undamped_half_width: {format_value(iv.undamped_half_width)}",
                f"damped_half_width: {format_value(iv.damped_half_width)}",
                f"damped_mu_to_zero_limit: {format_value(iv.damped_zero_damping_limit)}",
            ]
        except models.OverdampedWindowClosed:
            lines.append("instability_interval: closed (mu/omega0 > 1/2)")
    else:
        raise UsageError(
            "model-info models: ziegler, brouwer, lagrange, maclaurin, sobolev, combres"
        )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_report(args) -> int:
    from .report import render_report

    written = render_report(args.out_dir, quick=args.quick)
    for path in written:
        sys.stdout.write(f"{path}\n")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(
        prog="dissipstab",
        description="Stability analysis of nonconservative mechanical systems.",
    )
    parser.add_argument("--version", action="version", version=f"dissipstab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=True):
        p.add_argument("--out", default=None, help="write output to this path instead of stdout")
        if fmt:
            p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--tol", type=float, default=1e-9, help="boundary tolerance")

    p = sub.add_parser(
        "stability",
        help="classify a real monic quartic",
        epilog="prints verdict, certificate, H, abscissa; exit code 0 stable, 1 unstable, 2 marginal",
    )
    for name in ("a1", "a2", "a3", "a4"):
        p.add_argument(name, type=float)
    common(p, fmt=False)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser(
        "roots",
        help="roots of a polynomial with multiplicities",
        epilog="columns: root_re, root_im, multiplicity",
    )
    p.add_argument("coeffs", type=float, nargs="+", help="coefficients, descending powers")
    common(p)
    p.set_defaults(func=cmd_roots, tol=1e-12)

    p = sub.add_parser(
        "sweep",
        help="parameter sweep from a JSON config",
        epilog="columns: one per axis, then the requested outputs "
        "(verdict, abscissa, leading_re/leading_im, H, krein)",
    )
    p.add_argument("--config", required=True)
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: DISSIPSTAB_THREADS or 1)")
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser(
        "surface",
        help="sample the neutral ruled surface (a4 = 1)",
        epilog="columns: a1, a2, a3, H, double_line",
    )
    p.add_argument("--m-min", type=float, default=0.2)
    p.add_argument("--m-max", type=float, default=5.0)
    p.add_argument("--m-count", type=int, default=25)
    p.add_argument("--a1-min", type=float, default=0.0)
    p.add_argument("--a1-max", type=float, default=4.0)
    p.add_argument("--a1-count", type=int, default=21)
    common(p)
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser(
        "paradox",
        help="vanishing-damping limit of an instability threshold",
        epilog="columns: eps, onset; plus limit, undamped onset, gap",
    )
    p.add_argument("--model", required=True)
    p.add_argument("--eps", default="1e-2,1e-3,1e-4", help="comma-separated damping scales")
    p.add_argument("--load-min", type=float, default=None)
    p.add_argument("--load-max", type=float, default=None)
    common(p)
    p.set_defaults(func=cmd_paradox)

    p = sub.add_parser(
        "krein-path",
        help="eigenvalues with signature signs along a parameter path",
        epilog="columns: parameter, then per eigenvalue re/im/sign/multiplicity; "
        "collision events appended as comments (csv) or an events array (json)",
    )
    p.add_argument("--model", required=True, choices=("sobolev", "maclaurin"))
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--count", type=int, default=41)
    p.add_argument("--param-name", default="c")
    p.add_argument("--a", type=float, default=1.0, help="sobolev equatorial semiaxis")
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--Omega-spin", type=float, default=1.0)
    common(p)
    p.set_defaults(func=cmd_krein_path, tol=1e-12)

    p = sub.add_parser(
        "abscissa-min",
        help="minimize the abscissa under one affine coefficient constraint",
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument(
        "--constraint",
        required=True,
        help="comma-separated b0,b1,...,bn (use --constraint=-1,... for a leading minus)",
    )
    p.add_argument("--field", choices=("real", "complex"), default="real")
    common(p, fmt=False)
    p.set_defaults(func=cmd_abscissa_min)

    p = sub.add_parser("model-info", help="closed-form constants of a catalog model")
    p.add_argument("--model", required=True)
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    common(p, fmt=False)
    p.set_defaults(func=cmd_model_info)

    p = sub.add_parser(
        "report",
        help="render the survey figures and tables to a directory",
    )
    p.add_argument("--out-dir", default="report")
    p.add_argument("--quick", action="store_true", help="coarser grids, faster render")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EX_USAGE
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EX_CONFIG
    except GuardExceeded as exc:
        sys.stderr.write(f"guard exceeded: {exc}\n")
        return EX_GUARD
    except FileNotFoundError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EX_CONFIG
    except NoOnsetFound as exc:
        sys.stderr.write(f"no onset: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
