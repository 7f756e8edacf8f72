"""L-functions of elliptic curves y^2 = x^3 + A(t) x + B(t) over F_q(t), p >= 5.

Each place gets a minimal short Weierstrass model, a reduction type and the
trace a_v = |v| + 1 - #E_v(F_v), where the count includes the singular point
of a bad fibre. The Dirichlet coefficients

    Lambda_f = sum over places v with d_v | f of d_v * (alpha_v^m + conj^m),  m = f / d_v,

then pin down the polynomial of degree n_E - 4. Four further coefficients are
kept as an overdetermined check, and ``fibre_lambdas`` recomputes all of
them by an unrelated route (summing fibre traces over P^1(F_{q^f})).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import lfun_core as lf
from .errors import (
    CharTooSmall,
    ConstantCurve,
    IdentityMismatch,
    OverdeterminationFailure,
    SizeGuardExceeded,
    ZetaLabError,
)
from .finite_field import (
    ENUM_GUARD,
    Extension,
    FieldSpec,
    UniPoly,
    extension,
    factor_squarefree_part,
    find_place,
    places_of_degree,
)

GOOD = "good"
MULTIPLICATIVE = "multiplicative"
ADDITIVE = "additive"
INFINITY = "inf"
EXTRA_LAMBDAS = 4
_BLOCK = 1 << 22  # elements per vectorised block in trace sums
TRACE_GUARD = 2**28  # q^(2f) work bound for trace sums over degree-f places


@dataclass(frozen=True)
class EllipticSurface:
    base: FieldSpec
    A: UniPoly
    B: UniPoly

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def disc(self) -> UniPoly:
        """-16 (4 A^3 + 27 B^2)."""
        return _disc(self.base, self.A, self.B)


def _disc(F: FieldSpec, A: UniPoly, B: UniPoly) -> UniPoly:
    return (A**3 * F.from_int(4) + B**2 * F.from_int(27)) * F.from_int(-16)


def elliptic_surface(F: FieldSpec, A: UniPoly | Sequence[int], B: UniPoly | Sequence[int]) -> EllipticSurface:
    if F.p < 5:
        raise CharTooSmall(f"characteristic {F.p} < 5 is not supported")
    A = A if isinstance(A, UniPoly) else UniPoly.from_ints(F, A)
    B = B if isinstance(B, UniPoly) else UniPoly.from_ints(F, B)
    E = EllipticSurface(F, A, B)
    if E.disc.is_zero():
        raise ZetaLabError("discriminant vanishes identically")
    # j = 1728 * 4A^3 / (4A^3 + 27B^2) is constant iff A^3 is a multiple of the denominator
    A3 = A**3
    D = A3 * F.from_int(4) + B**2 * F.from_int(27)
    if A.is_zero() or (A3.degree == D.degree and (A3 * D.lead - D * A3.lead).is_zero()):
        raise ConstantCurve("j-invariant is constant")
    return E


# -- local analysis ------------------------------------------------------------------

def valuation(f: UniPoly, pi: UniPoly) -> float:
    if f.is_zero():
        return math.inf
    v = 0
    while True:
        quot, rem = f.divmod(pi)
        if not rem.is_zero():
            return v
        f, v = quot, v + 1


def _reverse(f: UniPoly, n: int) -> UniPoly:
    """s^n f(1/s) for n >= deg f."""
    padded = list(f.coeffs) + [0] * (n + 1 - len(f.coeffs))
    return UniPoly(f.F, tuple(reversed(padded)))


def local_model(E: EllipticSurface, place) -> tuple[UniPoly, UniPoly, UniPoly]:
    """(pi, A_min, B_min): a uniformizer polynomial and a model minimal at the place.

    At infinity the model is written in s = 1/t and pi = s.
    """
    F = E.base
    if place == INFINITY:
        degA = E.A.degree if not E.A.is_zero() else 0
        k = max(-(-degA // 4), -(-E.B.degree // 6), 0)
        A, B = _reverse(E.A, 4 * k), _reverse(E.B, 6 * k)
        pi = UniPoly(F, (0, 1))
    else:
        A, B, pi = E.A, E.B, place.monic()
    pi4, pi6 = pi**4, pi**6
    while valuation(A, pi) >= 4 and valuation(B, pi) >= 6:
        A, B = A // pi4, B // pi6
    return pi, A, B


def _traces(ext: Extension, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """-sum_x chi(x^3 + a x + b) over the big field, for each pair (a, b)."""
    big = ext.big
    xs = big.elements()
    x3 = big.vpow(xs, 3)
    a, b = np.atleast_1d(a), np.atleast_1d(b)
    out = np.zeros(a.size, dtype=np.int64)
    rows = max(1, _BLOCK // big.q)
    for lo in range(0, a.size, rows):
        aa, bb = a[lo : lo + rows, None], b[lo : lo + rows, None]
        vals = big.vadd(big.vadd(x3[None, :], big.vmul(aa, xs[None, :])), bb)
        out[lo : lo + rows] = -big.vchi(vals).sum(axis=1)
    return out


@dataclass(frozen=True)
class PlaceReduction:
    place: object  # UniPoly or INFINITY
    degree: int
    kind: str
    a_v: int
    q: int

    @property
    def n_v(self) -> int:
        return {GOOD: 0, MULTIPLICATIVE: 1, ADDITIVE: 2}[self.kind]

    @property
    def norm(self) -> int:
        return self.q**self.degree

    def trace_power(self, m: int) -> int:
        """alpha^m + conj(alpha)^m, or a_v^m at a bad place."""
        if self.kind != GOOD:
            return self.a_v**m
        t0, t1 = 2, self.a_v
        if m == 0:
            return t0
        for _ in range(m - 1):
            t0, t1 = t1, self.a_v * t1 - self.norm * t0
        return t1

    def label(self) -> str:
        return "inf" if self.place == INFINITY else str(self.place)

    def to_record(self) -> dict:
        return {"place": self.label(), "degree": self.degree, "type": self.kind, "n_v": self.n_v, "a_v": self.a_v}


def reduce_at(E: EllipticSurface, place) -> PlaceReduction:
    """Reduction type and a_v at a monic irreducible place, or at INFINITY."""
    if E.base.p < 5:
        raise CharTooSmall(f"characteristic {E.base.p} < 5 is not supported")
    F = E.base
    pi, A, B = local_model(E, place)
    deg = pi.degree
    if F.q**deg > ENUM_GUARD:
        raise SizeGuardExceeded(f"residue field of size {F.q}^{deg} exceeds the guard")
    vD = valuation(_disc(F, A, B), pi)
    if vD == 0:
        kind = GOOD
    elif valuation(A, pi) == 0:  # c4 = -48 A
        kind = MULTIPLICATIVE
    else:
        kind = ADDITIVE
    if place == INFINITY:
        ext, root = extension(F, 1), 0
    else:
        pl = find_place(F, pi)
        ext, root = pl.ext, pl.root
    a = A.eval_in(ext, np.array([root]))
    b = B.eval_in(ext, np.array([root]))
    a_v = int(_traces(ext, a, b)[0])
    red = PlaceReduction(place, deg, kind, a_v, F.q)
    _check_reduction(red)
    return red


def _check_reduction(red: PlaceReduction) -> None:
    if red.kind == GOOD and red.a_v * red.a_v > 4 * red.norm:
        raise IdentityMismatch(f"Hasse bound fails at {red.label()}: a_v = {red.a_v}")
    if red.kind == MULTIPLICATIVE and red.a_v not in (-1, 1):
        raise IdentityMismatch(f"multiplicative place {red.label()} has a_v = {red.a_v}")
    if red.kind == ADDITIVE and red.a_v != 0:
        raise IdentityMismatch(f"additive place {red.label()} has a_v = {red.a_v}")


def bad_places(E: EllipticSurface) -> list[PlaceReduction]:
    """All places of bad reduction, finite ones sorted by (degree, coefficients), then infinity."""
    out = []
    for pi, _ in factor_squarefree_part(E.disc):
        red = reduce_at(E, pi)
        if red.kind != GOOD:
            out.append(red)
    red = reduce_at(E, INFINITY)
    if red.kind != GOOD:
        out.append(red)
    return out


def conductor_degree(E: EllipticSurface) -> int:
    return sum(r.n_v * r.degree for r in bad_places(E))


# -- Dirichlet coefficients ----------------------------------------------------------

def place_reductions(E: EllipticSurface, D: int) -> dict[int, list[PlaceReduction]]:
    """Reductions at every place of degree <= D (infinity counted in degree 1)."""
    F = E.base
    disc = E.disc
    out: dict[int, list[PlaceReduction]] = {}
    for d in range(1, D + 1):
        if F.q ** (2 * d) > TRACE_GUARD:
            raise SizeGuardExceeded(f"trace sums over degree-{d} places of F_{F.q}(t) exceed the guard")
        reds: list[PlaceReduction] = []
        good = []
        for pl in places_of_degree(F, d):
            if (disc % pl.poly).is_zero():
                reds.append(reduce_at(E, pl.poly))
            else:
                good.append(pl)
        if good:
            ext = good[0].ext
            roots = np.array([pl.root for pl in good], dtype=np.int64)
            traces = _traces(ext, E.A.eval_in(ext, roots), E.B.eval_in(ext, roots))
            for pl, a_v in zip(good, traces):
                red = PlaceReduction(pl.poly, d, GOOD, int(a_v), F.q)
                _check_reduction(red)
                reds.append(red)
        if d == 1:
            reds.append(reduce_at(E, INFINITY))
        out[d] = reds
    return out


def lambdas_from_reductions(reds: dict[int, list[PlaceReduction]], F: int) -> list[int]:
    lam = []
    for f in range(1, F + 1):
        total = 0
        for d, rs in reds.items():
            if f % d == 0:
                m = f // d
                total += d * sum(r.trace_power(m) for r in rs)
        lam.append(total)
    return lam


def ell_lambdas(E: EllipticSurface, F: int) -> list[int]:
    """Lambda_1..Lambda_F as exact integers."""
    lam = lambdas_from_reductions(place_reductions(E, F), F)
    for f, x in enumerate(lam, start=1):
        if x * x > 4 * (E.q**f + 1) ** 2 * E.q**f:
            raise IdentityMismatch(f"|Lambda_{f}| = {abs(x)} exceeds the trivial bound")
    return lam


def fibre_lambdas(E: EllipticSurface, F: int) -> list[int]:
    """Lambda_f as a sum of fibre traces over all t in P^1(F_{q^f}).

    Independent of the place enumeration and the trace recurrence: each
    t is evaluated in the model that is minimal at its own place.
    """
    Fq = E.base
    # places where the global model is not minimal, with their minimal models
    special = []
    for pi, _ in factor_squarefree_part(E.disc):
        _, A, B = local_model(E, pi)
        if A.coeffs != E.A.coeffs or B.coeffs != E.B.coeffs:
            special.append((pi, A, B))
    _, Ainf, Binf = local_model(E, INFINITY)
    lam = []
    for f in range(1, F + 1):
        if Fq.q ** (2 * f) > TRACE_GUARD:
            raise SizeGuardExceeded(f"fibre sum over F_{Fq.q}^{f} exceeds the guard")
        ext = extension(Fq, f)
        ts = ext.big.elements()
        a, b = E.A.eval_in(ext, ts), E.B.eval_in(ext, ts)
        for pi, A, B in special:
            hit = pi.eval_in(ext, ts) == 0
            a = np.where(hit, A.eval_in(ext, ts), a)
            b = np.where(hit, B.eval_in(ext, ts), b)
        total = int(_traces(ext, a, b).sum())
        zero = np.array([0])
        total += int(_traces(ext, Ainf.eval_in(ext, zero), Binf.eval_in(ext, zero))[0])
        lam.append(total)
    return lam


# -- the L-function ------------------------------------------------------------------

@dataclass(frozen=True)
class EllLData:
    n_E: int
    lambdas: tuple[int, ...]
    L: lf.LFunction = field(repr=False)
    omega: int
    places: tuple[PlaceReduction, ...] = field(repr=False)

    @property
    def d(self) -> int:
        return self.n_E - 4

    def to_record(self) -> dict:
        return {
            "n_E": self.n_E,
            "degree": self.d,
            "coeffs": [int(c) for c in self.L.coeffs],
            "omega": self.omega,
            "lambdas": list(self.lambdas),
            "places": [r.to_record() for r in self.places],
        }


def ell_lfunction(E: EllipticSurface, label: str | None = None) -> EllLData:
    bad = bad_places(E)
    n_E = sum(r.n_v * r.degree for r in bad)
    d = n_E - 4
    if d < 0:
        raise IdentityMismatch(f"conductor degree {n_E} < 4", label)
    F = d + EXTRA_LAMBDAS
    lam = ell_lambdas(E, F)
    L = lf.lfunction_from_lambdas(E.q, 2, d, [Fraction(x) for x in lam[:d]], label=label)
    if any(c.denominator != 1 for c in L.coeffs):
        raise IdentityMismatch("reconstructed coefficients are not integers", label)
    again = lf.lambdas_from_coeffs(L.coeffs, F)
    if [int(x) for x in again] != lam or any(x.denominator != 1 for x in again):
        raise OverdeterminationFailure(
            f"Lambda_1..{F} from places {lam} disagree with the polynomial {[str(x) for x in again]}", label
        )
    return EllLData(n_E, tuple(lam), L, L.omega, tuple(bad))
