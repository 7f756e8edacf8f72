"""Zeta functions of hyperelliptic curves y^2 = f(x) over F_q, q odd.

Point counts come from the quadratic character of f over F_{q^f}. The
numerator P(u) is rebuilt from N_1..N_g using the functional equation, and
any further counts act as an overdetermined check on it.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import lfun_core as lf
from .errors import (
    NegativePhi,
    NonIntegerCoefficient,
    NotSquarefree,
    OverdeterminationFailure,
    SizeGuardExceeded,
    ZetaLabError,
)
from .finite_field import ENUM_GUARD, FieldSpec, UniPoly, extension, mobius, poly_gcd

HYPERELLIPTIC = "hyperelliptic_odd_char"
ELLIPTIC = "elliptic_weierstrass"
MAX_GAMMA_ORDER = 8


@dataclass(frozen=True)
class CurveModel:
    kind: str
    base: FieldSpec
    f: UniPoly

    @property
    def g(self) -> int:
        return (self.f.degree - 1) // 2

    @property
    def q(self) -> int:
        return self.base.q


def curve_model(F: FieldSpec, f: UniPoly | Sequence[int]) -> CurveModel:
    """The smooth projective model of y^2 = f(x); f must be squarefree."""
    if F.p == 2:
        raise ZetaLabError("hyperelliptic models need odd characteristic")
    if not isinstance(f, UniPoly):
        f = UniPoly.from_ints(F, f)
    if f.degree < 1:
        raise NotSquarefree("f must have degree at least 1")
    if poly_gcd(f, f.derivative()).degree > 0:
        raise NotSquarefree(f"f = {f} is not squarefree")
    kind = ELLIPTIC if f.degree in (3, 4) else HYPERELLIPTIC
    return CurveModel(kind, F, f)


def _chunks(n: int) -> int:
    try:
        return max(1, int(os.environ.get("ZETALAB_THREADS", "1")))
    except ValueError:
        return 1


def count_points(C: CurveModel, f: int) -> int:
    """N_f, the number of F_{q^f}-points of the smooth projective model."""
    if f < 1:
        raise ValueError("extension degree must be >= 1")
    if C.q**f > ENUM_GUARD:
        raise SizeGuardExceeded(f"counting over F_{C.q}^{f} exceeds the guard")
    ext = extension(C.base, f)
    big = ext.big
    affine = 0
    # x-range split into blocks; the partial sums are independent
    for xs in np.array_split(big.elements(), _chunks(big.q)):
        affine += int(np.sum(1 + big.vchi(C.f.eval_in(ext, xs))))
    if C.f.degree % 2 == 1:
        infinity = 1
    else:
        # two points if the leading coefficient is a square in F_{q^f}, else none
        infinity = 1 + big.chi(ext.embed(C.f.lead))
    return affine + infinity


@dataclass(frozen=True)
class CurveZeta:
    q: int
    g: int
    counts: tuple[int, ...]
    numerator: lf.LFunction = field(repr=False)
    h: int
    gammas: tuple[float, ...] = ()

    def zeta(self) -> lf.ZetaFunction:
        """P(u) / ((1 - u)(1 - q u)) as a ZetaFunction."""
        one = lf.validate_lfunction(self.q, 0, [1, -1], label="1-u")
        top = lf.validate_lfunction(self.q, 2, [1, -self.q], label="1-qu")
        return lf.ZetaFunction.of((one, -1), (self.numerator, 1), (top, -1), label=self.numerator.label)

    def counts_from_numerator(self, B: int) -> list[int]:
        lam = lf.lambdas_from_coeffs(self.numerator.coeffs, B)
        return [int(lam[f - 1] + 1 + self.q**f) for f in range(1, B + 1)]


def zeta_from_counts(q: int, g: int, counts: Sequence[int], label: str | None = None) -> CurveZeta:
    """Rebuild P(u) of a genus-g curve over F_q from N_1..N_g."""
    if len(counts) != g:
        raise ValueError(f"expected exactly {g} point counts, got {len(counts)}")
    lam = [Fraction(int(n) - 1 - q**f) for f, n in enumerate(counts, start=1)]
    low = lf.coeffs_from_lambdas(lam, g)
    if any(c.denominator != 1 for c in low):
        raise NonIntegerCoefficient(f"counts {list(counts)} give non-integral coefficients", label)
    coeffs = low + [Fraction(0)] * g
    for i in range(g):
        coeffs[2 * g - i] = Fraction(q) ** (g - i) * low[i]
    full = lf.lambdas_from_coeffs(coeffs, 2 * g)
    P = lf.lfunction_from_lambdas(q, 1, 2 * g, full, label=label)
    h = sum(P.coeffs)
    if h.denominator != 1 or h <= 0:
        raise NonIntegerCoefficient(f"class number P(1) = {h} is not a positive integer", label)
    return CurveZeta(q, g, tuple(int(n) for n in counts), P, int(h))


def curve_zeta(C: CurveModel, B: int | None = None, K: int = 0, label: str | None = None) -> CurveZeta:
    """Count, reconstruct, and cross-check against counts up to B (default 2g+2, guard permitting)."""
    g = C.g
    if B is None:
        B = 2 * g + 2
        while B > g and C.q**B > ENUM_GUARD:
            B -= 1
    B = max(B, g)
    counts = [count_points(C, f) for f in range(1, B + 1)]
    Z = zeta_from_counts(C.q, g, counts[:g], label=label or str(C.f))
    predicted = Z.counts_from_numerator(B)
    if predicted != counts:
        raise OverdeterminationFailure(f"counts {counts} disagree with reconstruction {predicted}", label)
    gammas = tuple(euler_kronecker(Z, K)) if K >= 0 else ()
    return CurveZeta(Z.q, g, tuple(counts), Z.numerator, Z.h, gammas)


def phi_from_counts(counts: Sequence[int]) -> list[int]:
    """Phi_f, the number of degree-f places, from N_f = sum_{m | f} m Phi_m."""
    if len(counts) < 1:
        raise ValueError("need at least one count")
    out = []
    for f in range(1, len(counts) + 1):
        total = sum(mobius(f // m) * counts[m - 1] for m in range(1, f + 1) if f % m == 0)
        if total % f:
            raise NonIntegerCoefficient(f"Phi_{f} = {total}/{f} is not an integer")
        if total < 0:
            raise NegativePhi(f"Phi_{f} = {total // f} is negative")
        out.append(total // f)
    return out


# -- Euler-Kronecker constants ---------------------------------------------------

def _series_mul(a: list[Fraction], b: list[Fraction], n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def _series_inv(a: list[Fraction], n: int) -> list[Fraction]:
    out = [1 / a[0]]
    for k in range(1, n):
        acc = sum((a[j] * out[k - j] for j in range(1, min(k, len(a) - 1) + 1)), Fraction(0))
        out.append(-acc / a[0])
    return out


def _exp_neg(n: int) -> list[Fraction]:
    return [Fraction((-1) ** k, math.factorial(k)) for k in range(n)]


def _bernoulli_part(n: int) -> list[Fraction]:
    """Series of 1/(e^x - 1) - 1/x."""
    # x/(e^x - 1) = 1 / (sum x^k/(k+1)!)
    inv = _series_inv([Fraction(1, math.factorial(k + 1)) for k in range(n + 1)], n + 1)
    return inv[1 : n + 1]


def gamma_series(q: int, coeffs: Sequence[Fraction], K: int) -> list[Fraction]:
    """Exact G_0..G_K where zeta'/zeta + 1/(s-1) = -log q * G(x), x = (s-1) log q."""
    n = K + 1
    u = [c / q for c in _exp_neg(n)]
    # powers of u as series
    powers = [[Fraction(1)] + [Fraction(0)] * (n - 1)]
    for _ in range(1, len(coeffs)):
        powers.append(_series_mul(powers[-1], u, n))
    P = [sum((coeffs[i] * powers[i][k] for i in range(len(coeffs))), Fraction(0)) for k in range(n)]
    uPd = [sum((i * coeffs[i] * powers[i][k] for i in range(1, len(coeffs))), Fraction(0)) for k in range(n)]
    num = _series_mul(uPd, _series_inv(P, n), n)
    one_minus_u = [1 - u[0]] + [-c for c in u[1:]]
    geo = _series_mul(u, _series_inv(one_minus_u, n), n)
    bern = _bernoulli_part(n)
    return [num[k] + geo[k] + bern[k] for k in range(n)]


def euler_kronecker(Z: CurveZeta, K: int) -> list[float]:
    """gamma^0..gamma^K: Taylor coefficients in (s-1) of zeta'/zeta(s) + 1/(s-1) at s = 1.

    gamma^0 is the Euler-Kronecker constant.
    """
    if K < 0:
        return []
    if K > MAX_GAMMA_ORDER:
        raise ValueError(f"order K={K} exceeds {MAX_GAMMA_ORDER}")
    G = gamma_series(Z.q, Z.numerator.coeffs, K)
    lq = math.log(Z.q)
    return [-(lq ** (k + 1)) * float(G[k]) for k in range(K + 1)]


# -- enumeration -------------------------------------------------------------------

def squarefree_polys(F: FieldSpec, deg: int) -> Iterator[UniPoly]:
    """Monic squarefree polynomials of a given degree, lexicographic in (c_0, c_1, ...)."""
    for low in itertools.product(range(F.q), repeat=deg):
        f = UniPoly(F, tuple(low) + (1,))
        if poly_gcd(f, f.derivative()).degree == 0:
            yield f


def first_squarefree(F: FieldSpec, deg: int) -> UniPoly:
    return next(squarefree_polys(F, deg))
