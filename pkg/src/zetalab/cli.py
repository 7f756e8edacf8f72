"""Command-line front end: ``zetalab <command> [options]``.

Every command writes ``<out>/<command>.json`` and prints the same JSON on
stdout. Exit codes: 0 when every hard check passed, 2 when a hard check
failed, 3 on malformed input. Soft checks (trends, limit comparisons)
only add warnings.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from . import asymptotics as asy
from . import curve_zeta as cz
from . import elliptic_surface as es
from . import lfun_core as lf
from . import zero_distribution as zd
from .errors import AllNegligible, IdentityMismatch, MissingSection, ZetaLabError
from .finite_field import make_field

EXIT_OK, EXIT_HARD, EXIT_INPUT = 0, 2, 3
COMMANDS = ("validate", "curve-zeta", "ell-lfun", "family-report", "zero-density", "zero-hist", "bs-report")
PLOT_HEADERS = {
    "density": ("x", "value"),
    "histogram": ("bin_lo", "bin_hi", "empirical", "predicted"),
    "bs": ("k", "d_tilde", "ratio", "limit", "gap"),
    "sweep": ("x", "slack"),
    "roots": ("label", "theta", "multiplicity"),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass
class Report:
    command: str
    args: dict
    digest: str
    sections: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    plots: dict = field(default_factory=dict)  # kind -> rows, written by emit_plotdata
    status: int = EXIT_OK

    def fail(self, exc: ZetaLabError) -> None:
        code = EXIT_HARD if exc.hard else EXIT_INPUT
        self.status = max(self.status, code)
        self.errors.append({"type": type(exc).__name__, "label": exc.label, "message": str(exc), "hard": exc.hard})

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "args": self.args,
            "input_digest": self.digest,
            "version": __version__,
            "status": {EXIT_OK: "ok", EXIT_HARD: "hard_failure", EXIT_INPUT: "input_error"}[self.status],
            "sections": self.sections,
            "warnings": self.warnings,
            "errors": self.errors,
        }

    def dumps(self) -> str:
        return json.dumps(jsonable(self.to_dict()), sort_keys=True, indent=2) + "\n"


def jsonable(obj):
    """Plain JSON types; Fractions become strings, complex numbers [re, im]."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, frozenset, set)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(x) for x in items]
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else int(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, complex):
        return [jsonable(obj.real), jsonable(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return "%.12g" % float(x)


def emit_plotdata(report: Report, kind: str, out_dir: str | os.PathLike) -> Path:
    """Write one plot section as CSV (12 significant digits, LF endings)."""
    if kind not in report.plots:
        raise MissingSection(f"report of {report.command!r} has no {kind!r} section")
    path = Path(out_dir) / f"{report.command}_{kind}.csv"
    lines = [",".join(PLOT_HEADERS[kind])]
    lines += [",".join(_fmt(v) for v in row) for row in report.plots[kind]]
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


# -- input helpers ---------------------------------------------------------------------

def _digest(paths: Sequence[str], extra: dict) -> str:
    h = hashlib.sha256()
    for p in paths:
        h.update(Path(p).read_bytes())
    h.update(json.dumps(extra, sort_keys=True).encode())
    return h.hexdigest()


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ZetaLabError(f"cannot read {path}: {exc}") from exc


def _records(path: str) -> list:
    data = _load_json(path)
    if isinstance(data, dict):
        data = data.get("records", data.get("members", [data]))
    if not isinstance(data, list):
        raise ZetaLabError(f"{path} must hold a JSON array of records")
    return data


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError as exc:
        raise ZetaLabError(f"expected comma-separated integers, got {text!r}") from exc


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ZetaLabError(f"expected comma-separated numbers, got {text!r}") from exc


def _field_of(q: int):
    p, e = lf.prime_power(q)
    return make_field(p, e)


def _root_summary(L: lf.LFunction) -> dict:
    ang = L.angles()
    return {
        "count": int(L.d),
        "distinct": len(L.roots),
        "central": zd.central_multiplicity(L),
        "max_radius_error": max((abs(abs(r.value) - L.radius) / L.radius for r in L.roots), default=0.0),
        "theta_min": float(ang.min()) if len(ang) else None,
        "theta_max": float(ang.max()) if len(ang) else None,
    }


# -- commands -----------------------------------------------------------------------------

def cmd_validate(args, rep: Report) -> None:
    out = []
    for i, rec in enumerate(_records(args.infile)):
        label = rec.get("label") or f"record{i}"
        try:
            L = lf.lfunction_from_record(dict(rec, label=label), mode=args.mode, rh_tol=args.rh_tol)
        except ZetaLabError as exc:
            rep.fail(exc)
            out.append({"label": label, "valid": False, "error": str(exc)})
            continue
        out.append({"label": label, "valid": True, "q": L.q, "w": L.w, "d": L.d, "omega": L.omega,
                    "roots": _root_summary(L)})
        rep.plots.setdefault("roots", []).extend((label, r.theta, r.multiplicity) for r in L.roots)
    rep.sections["lfunctions"] = out


def _curve_entry(C: cz.CurveModel, args) -> dict:
    Z = cz.curve_zeta(C, B=args.B, K=args.K, label=str(C.f))
    return {
        "poly": [int(c) for c in C.f.coeffs],
        "genus": Z.g,
        "counts": list(Z.counts),
        "numerator_coeffs": [int(c) for c in Z.numerator.coeffs],
        "h": Z.h,
        "gamma": list(Z.gammas),
        "phi": cz.phi_from_counts(Z.counts),
    }


def cmd_curve_zeta(args, rep: Report) -> None:
    q, g = args.q, args.genus
    if args.counts is not None:
        Z = cz.zeta_from_counts(q, g, _ints(args.counts), label="counts")
        rep.sections["curve"] = {
            "genus": g,
            "counts": list(Z.counts),
            "numerator_coeffs": [int(c) for c in Z.numerator.coeffs],
            "h": Z.h,
            "gamma": cz.euler_kronecker(Z, args.K),
        }
        return
    F = _field_of(q)
    if args.all:
        deg = args.degree or 2 * g + 1
        entries = []
        for f in cz.squarefree_polys(F, deg):
            try:
                entries.append(_curve_entry(cz.curve_model(F, f), args))
            except ZetaLabError as exc:
                rep.fail(exc)
        rep.sections["curves"] = entries
        rep.sections["count"] = len(entries)
        return
    if args.poly is None:
        raise ZetaLabError("curve-zeta needs --poly, --all or --counts")
    C = cz.curve_model(F, _ints(args.poly))
    if C.g != g:
        raise ZetaLabError(f"polynomial of degree {C.f.degree} gives genus {C.g}, not {g}")
    rep.sections["curve"] = _curve_entry(C, args)


def cmd_ell_lfun(args, rep: Report) -> None:
    F = make_field(args.p, args.e)
    E = es.elliptic_surface(F, _ints(args.A), _ints(args.B))
    data = es.ell_lfunction(E, label=f"A={args.A};B={args.B}")
    rec = data.to_record()
    if args.fibre_check:
        fib = es.fibre_lambdas(E, len(data.lambdas))
        rec["fibre_lambdas"] = fib
        if list(fib) != list(data.lambdas):
            raise IdentityMismatch(f"fibre sums {fib} disagree with place sums {list(data.lambdas)}", "fibre")
    rep.sections["surface"] = rec


def _family(args):
    fam = asy.family_from_records(_records(args.infile), F=args.F, mode=args.mode)
    data = asy.estimate_limits(fam, conv_tol=args.conv_tol)
    return fam, data


def _density(data: asy.AsymptoticData, grid_points: int) -> zd.DensitySamples:
    if data.w_e is None:
        raise AllNegligible("every weight is negligible")
    very = data.very.verdict == asy.VERY_EXACT
    tail = 2 * data.very.tail_estimate if very and data.very.tail_estimate is not None else 0.0
    return zd.limit_density(data.lam_e, data.q, data.w_e, zd.default_grid(grid_points), tail, very)


def cmd_family_report(args, rep: Report) -> None:
    fam, data = _family(args)
    rep.sections["family"] = {"members": len(fam), "F": fam.F, "q": fam.q, "d_tilde": [m.d_tilde for m in fam.members]}
    rec = data.to_record()
    rec["classification_text"] = ", ".join(data.classification)
    rep.sections["asymptotics"] = rec
    rep.warnings.extend(data.warnings)
    if data.w_e is None:
        rep.warnings.append("every weight is negligible; limit sections skipped")
        return
    split = asy.essential_split(fam, data, tol=args.eval_tol)
    rep.sections["essential"] = {"negligible": sorted(split.I), "w_e": split.w_e, "max_gap": split.max_gap}
    if not split.ok:
        raise IdentityMismatch(f"essential/full coefficient gap {split.max_gap} exceeds its bound", "essential")

    # per-member ordering: a proven bound, hence a hard check
    lo, hi = data.w_e / 2, (data.w_e + 1) / 2
    s_values = [lo + (hi - lo) * k / 6 for k in range(1, 6)]
    member_rows = []
    for m in fam.members:
        if m.parts is None:
            continue
        for s in s_values:
            r = asy.basic_inequality_zeta_member(m, fam.q, data.I, s)
            member_rows.append({"label": m.label, "s": s, "lower": r.lower, "mid": r.mid, "upper": r.upper})
            if not r.holds:
                raise IdentityMismatch(f"basic inequality ordering fails at s={s}", m.label)
    rep.sections["member_inequalities"] = member_rows

    limit_rows = []
    for s in s_values:
        r = asy.basic_inequality_zeta(data, s)
        limit_rows.append({"s": s, "lower": r.lower, "mid": r.mid, "upper": r.upper, "tail": r.tail_bound, "holds": r.holds})
        if not r.holds:
            rep.warnings.append(f"limit ordering fails at s={s:.6g} (estimated limits)")
    rep.sections["limit_inequalities"] = limit_rows

    try:
        bl = [asy.basic_inequality_L(data, b) for b in range(1, data.F + 1)]
        rep.sections["basic_inequality_L"] = [
            {"b": r.b, "lhs": r.lhs, "slack": r.slack, "infinite_slack": r.infinite_slack} for r in bl
        ]
        if any(r.slack < -args.conv_tol for r in bl):
            rep.warnings.append("estimated limits violate the truncated basic inequality")
    except ZetaLabError as exc:
        rep.warnings.append(f"basic_inequality_L skipped: {exc}")

    try:
        cc = asy.central_comparison(fam, data)
        rep.sections["central"] = {"values": cc.values, "limit": cc.limit, "satisfied": cc.satisfied}
        if not cc.satisfied:
            rep.warnings.append("central coefficient comparison not satisfied by the last member")
    except ZetaLabError as exc:
        rep.warnings.append(f"central comparison skipped: {exc}")

    grid = zd.default_grid(args.grid)
    slack = zd.family_cosine_inequalities(data.lam_e, data.q, data.w_e, grid)
    rep.plots["sweep"] = list(zip(grid.tolist(), slack.tolist()))
    rep.sections["cosine_sweep"] = {"min_slack": float(slack.min()), "at_zero": float(zd.family_cosine_inequalities(data.lam_e, data.q, data.w_e, 0.0)[0])}

    if args.tower:
        bc = asy.base_change_lambda(asy.tower_from_record(_load_json(args.tower)), data.F)
        rep.sections["base_change"] = {"lambda": bc.lam, "inequality_lhs": bc.inequality_lhs, "bound": bc.bound, "slack": bc.slack}
        if bc.slack < -args.eval_tol:
            raise IdentityMismatch(f"base-change inequality violated by {-bc.slack}", "tower")


def cmd_zero_density(args, rep: Report) -> None:
    if args.phi is not None:
        if args.q is None:
            raise ZetaLabError("--phi needs --q")
        D = zd.curve_limit_density(_floats(args.phi), args.q, zd.default_grid(args.grid))
    else:
        if args.infile is None:
            raise ZetaLabError("zero-density needs --in or --phi")
        _, data = _family(args)
        D = _density(data, args.grid)
        rep.sections["classification"] = list(data.classification)
        rep.warnings.extend(data.warnings)
    rep.sections["density"] = {"F": D.F, "grid": len(D.x), "minimum": D.minimum, "tail_bound": D.tail_bound,
                               "formal": D.formal, "nonnegative": D.nonnegative()}
    if D.formal:
        rep.warnings.append("family not very exact: the density is a formal truncation")
    if not D.nonnegative():
        rep.warnings.append(f"density minimum {D.minimum:.6g} is below the tail allowance")
    rep.plots["density"] = D.rows()


def _member_measures(fam: asy.FamilyRecord, w_e: int) -> list[zd.ZeroMeasure]:
    out = []
    for m in fam.members:
        if m.zeta is None:
            raise MissingSection("histograms need full zeta records")
        facs = [L for L, e in m.zeta.factors if L.w == w_e and L.d > 0]
        if not facs:
            raise MissingSection(f"member has no factor of weight {w_e}", m.label)
        L = max(facs, key=lambda L: L.d)
        out.append(zd.zero_measure(L))
    return out


def cmd_zero_hist(args, rep: Report) -> None:
    fam, data = _family(args)
    D = _density(data, args.grid)
    res = zd.histogram_compare(_member_measures(fam, data.w_e), D, args.bins)
    rep.sections["histogram"] = {"bins": args.bins, "max_deviation": res.max_deviation}
    rep.warnings.extend(res.warnings)
    rep.plots["histogram"] = res.rows()


def cmd_bs_report(args, rep: Report) -> None:
    fam, data = _family(args)
    rows, out = [], []
    s_list = _floats(args.s) if args.s else None
    if s_list is None:
        lo = data.w_e / 2 if data.w_e is not None else 0.0
        s_list = [lo + k / 12 for k in range(1, 6)]
    for s in s_list:
        bs = asy.brauer_siegel_ratio(fam, data, s, form=args.form)
        out.append({"s": s, "ratios": bs.ratios, "limit": bs.limit, "gaps": bs.gaps, "tail_bound": bs.tail_bound,
                    "diagnostic": bs.diagnostic})
        if bs.diagnostic > args.conv_tol + bs.tail_bound:
            rep.warnings.append(f"Brauer-Siegel ratios at s={s:.6g} have not settled")
        for k, (dt, r, g) in enumerate(zip(bs.d_tildes, bs.ratios, bs.gaps)):
            rows.append((k, dt, float(np.real(r)), float(np.real(bs.limit)), g))
    rep.sections["brauer_siegel"] = out
    rep.plots["bs"] = rows


HANDLERS = {
    "validate": cmd_validate,
    "curve-zeta": cmd_curve_zeta,
    "ell-lfun": cmd_ell_lfun,
    "family-report": cmd_family_report,
    "zero-density": cmd_zero_density,
    "zero-hist": cmd_zero_hist,
    "bs-report": cmd_bs_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--rh-tol", type=float, default=lf.DEFAULT_RH_TOL)
    common.add_argument("--eval-tol", type=float, default=asy.EVAL_TOL)
    common.add_argument("--conv-tol", type=float, default=asy.CONV_TOL)
    common.add_argument("--mode", choices=(lf.EXACT, lf.NUMERIC), default=lf.EXACT)
    common.add_argument("--plot", action="append", default=[], choices=sorted(PLOT_HEADERS),
                        help="also write this plot section as CSV (repeatable)")

    parser = _Parser(prog="zetalab", description="Zeta and L-functions over finite fields.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", parents=[common], help="validate L-function records")
    p.add_argument("--in", dest="infile", required=True)

    p = sub.add_parser("curve-zeta", parents=[common], help="zeta function of y^2 = f(x)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--poly", help="coefficients of f, constant term first")
    p.add_argument("--counts", help="ingest N_1..N_g instead of counting")
    p.add_argument("--all", action="store_true", help="every monic squarefree f of --degree")
    p.add_argument("--degree", type=int, help="degree for --all (default 2g+1)")
    p.add_argument("--B", type=int, help="count up to F_{q^B} for the consistency check")
    p.add_argument("--K", type=int, default=0, help="highest Euler-Kronecker order")

    p = sub.add_parser("ell-lfun", parents=[common], help="L-function of y^2 = x^3 + A x + B over F_q(t)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--e", type=int, default=1)
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--fibre-check", action="store_true", help="recompute Lambda_f from fibre sums")

    for name, helptext in (("family-report", "asymptotic analysis of a family"),
                           ("zero-density", "limit density of Frobenius angles"),
                           ("zero-hist", "angle histograms against the limit density"),
                           ("bs-report", "Brauer-Siegel ratios")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--in", dest="infile", required=name != "zero-density")
        p.add_argument("--F", type=int, help="number of coefficients to use")
        p.add_argument("--grid", type=int, default=zd.GRID_POINTS)
        if name == "family-report":
            p.add_argument("--tower", help="tower file for the base-change inequality")
        if name == "zero-density":
            p.add_argument("--phi", help="curve-family phi_1..phi_F instead of --in")
            p.add_argument("--q", type=int)
        if name == "zero-hist":
            p.add_argument("--bins", type=int, default=16)
        if name == "bs-report":
            p.add_argument("--s", help="comma-separated real sample points")
            p.add_argument("--form", choices=("essential", "full"), default="essential")
    return parser


def run(argv: Sequence[str] | None = None, stdout=None) -> tuple[int, Report | None]:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"zetalab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT, None
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "plot")}
    paths = [v for k, v in params.items() if k in ("infile", "tower") and v]
    try:
        digest = _digest(paths, params)
    except OSError as exc:
        print(f"zetalab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT, None
    rep = Report(args.command, params, digest)
    try:
        HANDLERS[args.command](args, rep)
    except ZetaLabError as exc:
        rep.fail(exc)
    except (ValueError, ZeroDivisionError, KeyError, TypeError) as exc:
        rep.fail(ZetaLabError(f"{type(exc).__name__}: {exc}"))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for kind in args.plot:
        try:
            emit_plotdata(rep, kind, out)
        except MissingSection as exc:
            rep.warnings.append(str(exc))
    text = rep.dumps()
    with open(out / f"{args.command}.json", "w", newline="\n") as fh:
        fh.write(text)
    stdout.write(text)
    for err in rep.errors:
        print(f"zetalab: {err['type']}: {err['message']}", file=sys.stderr)
    return rep.status, rep


def main(argv: Sequence[str] | None = None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
