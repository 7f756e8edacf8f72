"""Regenerate the JSON fixtures under fixtures/.

Every L-function record is built by a validated construction. The tower
fixture carries an ``expected_lambda`` table computed independently of
the library: each local factor's log is expanded as a power series with
sympy and the coefficients are collected by degree.
"""

from __future__ import annotations

import argparse
import json
from fractions import Fraction
from pathlib import Path

import sympy

from zetalab import asymptotics as asy
from zetalab import curve_zeta as cz
from zetalab import elliptic_surface as es
from zetalab import lfun_core as lf
from zetalab.finite_field import make_field

CURVE_FAMILY = {1: [0, 1, 0, 1], 2: [0, 1, 0, 0, 0, 1], 3: [0, 1, 0, 0, 0, 0, 1, 1],
                4: [0, 1] + [0] * 7 + [1], 5: [0, 1] + [0] * 9 + [1]}
TOWER_F = 8


def rec(L: lf.LFunction, label: str, eps: int | None = None) -> dict:
    out = {"label": label, "q": L.q, "w": L.w, "coeffs": [str(c) for c in L.coeffs]}
    if eps is not None:
        out["eps"] = eps
    return out


def zeta_rec(Z: lf.ZetaFunction, label: str) -> dict:
    return {"label": label, "factors": [rec(L, L.label or label, e) for L, e in Z.factors]}


def lfun_records() -> list[dict]:
    v = lf.validate_lfunction
    F3 = make_field(3)
    g2 = cz.curve_zeta(cz.curve_model(F3, cz.first_squarefree(F3, 5))).numerator
    ell = es.ell_lfunction(es.elliptic_surface(make_field(5), [0, 1], [1])).L
    return [
        rec(v(3, 0, [1, -1]), "trivial-q3"),
        rec(v(3, 1, [1, 0, 3]), "x3-x-over-F3"),
        rec(v(2, 1, [1, 0, 2]), "counts-q2-N3"),
        rec(ell, "surface-F5-t-1"),
        rec(v(4, 1, [1, -1, 4]), "q4-w1-quadratic"),
        rec(v(4, 1, [1, 0, -4]), "q4-w1-real-roots"),
        rec(v(9, 2, [1, -9]), "q9-w2-linear"),
        rec(g2, "genus2-over-F3"),
        rec(v(5, 1, [1, -2, 11, -10, 25]), "q5-w1-quartic"),
        rec(v(2, 0, ["1", "-1/2", "1"]), "q2-w0-rational"),
    ]


def trivial_family() -> list[dict]:
    return [zeta_rec(Z, Z.label) for Z in asy.trivial_family(3, [1, 2, 4, 8, 16, 32])]


def power_family() -> list[dict]:
    L = lf.validate_lfunction(4, 1, [1, -1, 4], label="base")
    return [zeta_rec(Z, Z.label) for Z in asy.power_family(L, [1, 2, 4, 8, 16])]


def curve_family() -> list[dict]:
    F3 = make_field(3)
    out = []
    for g, f in CURVE_FAMILY.items():
        Z = cz.curve_zeta(cz.curve_model(F3, f), label=f"genus{g}")
        out.append(zeta_rec(Z.zeta(), f"genus{g}"))
    return out


def _local_log(poly: list[int], step: int, F: int) -> list[Fraction]:
    """Coefficients of u d/du log(1/poly(u^step)) at u^1..u^F."""
    u = sympy.Symbol("u")
    expr = -sympy.log(sum(c * u ** (step * i) for i, c in enumerate(poly)))
    ser = sympy.series(expr, u, 0, F + 1).removeO()
    return [Fraction(str(sympy.Rational(ser.coeff(u, f)))) * f for f in range(1, F + 1)]


def tower() -> dict:
    E = es.elliptic_surface(make_field(5), [0, 1], [1])
    reds = es.place_reductions(E, 2)
    phi_pattern = {1: [1, 0, 2], 2: [0, 1]}
    places = []
    for d, rs in sorted(reds.items()):
        for i, r in enumerate(rs):
            phi = phi_pattern[d] if i % 2 == 0 else [0, 0, 1]
            places.append({"place_deg": r.degree, "a_v": r.a_v, "bad": r.kind != es.GOOD, "phi_vm": phi})
    nu = 6.0
    q = 5
    lam = [Fraction(0)] * TOWER_F
    for pl in places:
        dv, a = pl["place_deg"], pl["a_v"]
        for m, ph in enumerate(pl["phi_vm"], start=1):
            if not ph or m * dv > TOWER_F:
                continue
            if pl["bad"]:
                local = [1, -(a**m)]
            else:
                # alpha^m + conj^m from the characteristic polynomial of Frobenius
                x = sympy.Symbol("x")
                roots = sympy.Poly(x**2 - a * x + q**dv, x).all_roots()
                tm = sympy.nsimplify(sympy.expand(sum(r**m for r in roots)))
                local = [1, -int(tm), q ** (m * dv)]
            series = _local_log(local, m * dv, TOWER_F)
            for f in range(TOWER_F):
                lam[f] += ph * series[f]
    expected = [float(x) / (nu + 4) for x in lam]
    return {"q": q, "nu": nu, "phi": places, "expected_lambda": expected}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "fixtures"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "lfuns.json": lfun_records(),
        "family_trivial.json": trivial_family(),
        "family_power.json": power_family(),
        "family_curves.json": curve_family(),
        "tower.json": tower(),
    }
    for name, data in files.items():
        with open(out / name, "w", newline="\n") as fh:
            fh.write(json.dumps(data, indent=1, sort_keys=True) + "\n")
        print(f"wrote {out / name}")


if __name__ == "__main__":
    main()
