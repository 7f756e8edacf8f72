"""Validated L-functions and zeta functions over finite fields.

An L-function is stored through its polynomial ``L(u)`` in ``u = q**-s`` with
exact rational coefficients. Roots are computed once at validation time and
cached with multiplicities; everything that can be done without them
(Dirichlet coefficients, the functional equation, the RH certificate in exact
mode) is done in exact arithmetic.

Conventions:

* ``Lambda_f`` is defined by ``log L(s) = sum_f Lambda_f / f * u**f``, so
  ``Lambda_f = -sum_j rho_j**(-f)`` over the roots ``rho_j``.
* Frobenius angles ``theta`` live in ``(-pi, pi]`` with
  ``rho = q**(-w/2) * exp(i*theta)``; a root on the negative real axis gets
  ``theta = +pi``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import mpmath
import numpy as np

from . import qpoly
from .errors import (
    BadConstantTerm,
    NotPrimePower,
    NotSelfInversive,
    PoleOrZeroAt,
    RadiusExceeded,
    RHViolation,
    ZetaLabError,
)

DEFAULT_RH_TOL = 1e-9
DEFAULT_EVAL_TOL = 1e-9
DEFAULT_STARK_K = 10**4

EXACT = "exact"
NUMERIC = "numeric"


class Root(NamedTuple):
    value: complex
    multiplicity: int
    theta: float


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``; raise NotPrimePower otherwise."""
    if not isinstance(q, int) or isinstance(q, bool) or q < 2:
        raise NotPrimePower(f"q={q!r} is not a prime power")
    n, p = q, 2
    while p * p <= n:
        if n % p == 0:
            break
        p += 1
    else:
        return q, 1
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    if n != 1:
        raise NotPrimePower(f"q={q} is not a prime power")
    return p, e


def _isqrt_exact(n: int) -> int | None:
    r = math.isqrt(n)
    return r if r * r == n else None


def half_power(q: int, k: int) -> Fraction | None:
    """``q**(k/2)`` as an exact rational, or None when it is irrational."""
    if k % 2 == 0:
        return Fraction(q) ** (k // 2)
    r = _isqrt_exact(q)
    if r is None:
        return None
    return Fraction(r) ** k


def to_fraction(x, allow_float: bool = False) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("boolean is not a coefficient")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        if not allow_float or not math.isfinite(x):
            raise TypeError(f"float coefficient {x!r} not accepted in exact mode")
        return Fraction(x)
    raise TypeError(f"cannot use {x!r} as an exact real coefficient")


def _angle(rho: complex, radius: float) -> float:
    theta = cmath.phase(rho * (1.0 / radius))
    if theta <= -math.pi:
        theta = math.pi
    return theta


# -- root finding ------------------------------------------------------------

def _polish(coeffs: list[Fraction], guesses: np.ndarray, dps: int = 40) -> list[complex]:
    """Newton-polish roots of a squarefree rational polynomial in extended precision."""
    with mpmath.workdps(dps):
        cs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(coeffs)]
        dcs = [c * (len(cs) - 1 - i) for i, c in enumerate(cs[:-1])]
        out = []
        for z0 in guesses:
            z = mpmath.mpc(complex(z0))
            for _ in range(60):
                fz = mpmath.polyval(cs, z)
                dz = mpmath.polyval(dcs, z)
                if dz == 0:
                    break
                step = fz / dz
                z -= step
                if abs(step) <= abs(z) * mpmath.mpf(10) ** (-dps + 5):
                    break
            out.append(complex(z))
    return out


def _pair_conjugates(roots: list[complex], scale: float) -> list[complex]:
    """Snap near-real roots onto the axis and make non-real roots exact conjugate pairs."""
    tol = 1e-12 * max(scale, 1e-300)
    real = [complex(z.real, 0.0) for z in roots if abs(z.imag) <= tol]
    upper = sorted((z for z in roots if z.imag > tol), key=lambda z: (z.real, z.imag))
    lower = [z for z in roots if z.imag < -tol]
    out = list(real)
    for z in upper:
        if lower:
            k = min(range(len(lower)), key=lambda i: abs(lower[i] - z.conjugate()))
            w = lower.pop(k)
            z = complex((z.real + w.real) / 2, (z.imag - w.imag) / 2)
        out.extend([z, z.conjugate()])
    for w in lower:  # unmatched lower roots; keep their partner too
        out.extend([w, w.conjugate()])
    return out


def _squarefree_roots(factor: list[Fraction]) -> list[complex]:
    deg = len(factor) - 1
    if deg == 1:
        return [complex(-factor[0] / factor[1])]
    if deg == 2:
        a, b, c = (float(x) for x in (factor[2], factor[1], factor[0]))
        disc = cmath.sqrt(b * b - 4 * a * c)
        guesses = np.array([(-b + disc) / (2 * a), (-b - disc) / (2 * a)])
    else:
        lead = factor[-1]
        guesses = np.roots([float(c / lead) for c in reversed(factor)])
    roots = _polish(factor, guesses)
    if deg > 2 and not _distinct(roots):
        # Newton from clustered guesses can land twice on one root
        with mpmath.workdps(60):
            cs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(factor)]
            roots = [complex(z) for z in mpmath.polyroots(cs, maxsteps=400, extraprec=200)]
    return roots


def _distinct(roots: list[complex]) -> bool:
    z = np.array(roots)
    scale = max(float(np.max(np.abs(z))), 1e-300)
    gaps = np.abs(z[:, None] - z[None, :]) + np.eye(len(z)) * scale
    return float(gaps.min()) > 1e-9 * scale


def compute_roots(q: int, w: int, coeffs: Sequence[Fraction]) -> list[tuple[complex, int]]:
    """All roots of ``L(u)`` with multiplicities.

    Roots at ``u = +-q**(-w/2)`` are peeled off by exact division and placed
    exactly; the remaining part is split into squarefree factors whose roots
    are found numerically and polished in extended precision.
    """
    rest = qpoly.trim(list(coeffs))
    radius = q ** (-w / 2)
    found: list[tuple[complex, int]] = []
    # (1 - q^w u^2) has the two roots +-radius
    rest, m2 = qpoly.divide_out(rest, [Fraction(1), Fraction(0), -Fraction(q) ** w])
    mplus = mminus = m2
    s = half_power(q, w)
    if s is not None:
        rest, k = qpoly.divide_out(rest, [Fraction(1), -s])
        mplus += k
        rest, k = qpoly.divide_out(rest, [Fraction(1), s])
        mminus += k
    if mplus:
        found.append((complex(radius, 0.0), mplus))
    if mminus:
        found.append((complex(-radius, 0.0), mminus))
    for factor, mult in qpoly.squarefree_decomposition(rest):
        for z in _pair_conjugates(_squarefree_roots(factor), radius):
            found.append((z, mult))
    return found


# -- exact RH certificate ------------------------------------------------------

def _chebyshev_like(m: int, r2: Fraction) -> list[list[Fraction]]:
    """P_j(v) = u**j + (r2/u)**j written as polynomials in v = u + r2/u."""
    P = [[Fraction(2)], [Fraction(0), Fraction(1)]]
    for _ in range(1, m):
        nxt = qpoly.sub(qpoly.mul([Fraction(0), Fraction(1)], P[-1]), qpoly.scale(P[-2], r2))
        P.append(nxt)
    return P[: m + 1]


def exact_rh_certificate(q: int, w: int, coeffs: Sequence[Fraction]) -> tuple[bool, str]:
    """Decide exactly whether every root of L(u) lies on ``|u| = q**(-w/2)``.

    Roots at ``+-q**(-w/2)`` are divided out. What remains must have even
    degree ``2m`` and satisfy the functional equation with sign +1; writing
    ``u**-m * M(u)`` as a polynomial G in ``v = u + q**-w / u`` turns the
    condition into "all roots of G are real and lie in ``(-2r, 2r)``" with
    ``r = q**(-w/2)``, which a Sturm chain decides over Q. When r is
    irrational the interval endpoints are evaluated as quadratic surds.
    """
    rest = qpoly.trim(list(coeffs))
    rest, _ = qpoly.divide_out(rest, [Fraction(1), Fraction(0), -Fraction(q) ** w])
    s = half_power(q, w)
    if s is not None:
        rest, _ = qpoly.divide_out(rest, [Fraction(1), -s])
        rest, _ = qpoly.divide_out(rest, [Fraction(1), s])
    n = qpoly.degree(rest)
    if n == 0:
        return True, "all roots at +-q^(-w/2)"
    if n % 2:
        return False, f"odd degree {n} after peeling roots at +-q^(-w/2)"
    m = n // 2
    qw = Fraction(q) ** w
    for k in range(n + 1):
        if rest[k] * qw ** (m - k) != rest[n - k]:
            return False, "reduced polynomial is not self-inversive with sign +1"
    r2 = 1 / qw
    P = _chebyshev_like(m, r2)
    G = [rest[m]]
    for j in range(1, m + 1):
        G = qpoly.add(G, qpoly.scale(P[j], rest[m + j]))
    Gs = qpoly.divmod_(G, qpoly.gcd(G, qpoly.derivative(G)))[0]
    if s is not None:
        hi = qpoly.QuadSurd(2 / s)
        lo = qpoly.QuadSurd(-2 / s)
    else:
        # 2 q^(-w/2) = 2 q^(-(w+1)/2) sqrt(q)
        c = Fraction(2) / Fraction(q) ** ((w + 1) // 2)
        hi = qpoly.QuadSurd(0, c, q)
        lo = qpoly.QuadSurd(0, -c, q)
    chain = qpoly.sturm_chain(Gs)
    inside = qpoly.sign_variations(chain, lo) - qpoly.sign_variations(chain, hi)
    if inside != qpoly.degree(Gs):
        return False, f"only {inside} of {qpoly.degree(Gs)} distinct trace roots are real in (-2r, 2r)"
    return True, "Sturm certificate"


# -- functional equation ----------------------------------------------------------

def _root_number_exact(q: int, w: int, coeffs: Sequence[Fraction]) -> int | None:
    d = len(coeffs) - 1
    s = half_power(q, w * d)
    if s is None:
        return None
    for omega in (1, -1):
        if all(coeffs[k] * s == omega * coeffs[d - k] * Fraction(q) ** (w * k) for k in range(d + 1)):
            return omega
    return None


def _root_number_numeric(q: int, w: int, coeffs: Sequence[Fraction], tol: float) -> int | None:
    d = len(coeffs) - 1
    logq = math.log(q)
    for omega in (1, -1):
        ok = True
        for k in range(d + 1):
            lhs = float(coeffs[k]) * math.exp(w * (d / 2 - k) * logq)
            rhs = omega * float(coeffs[d - k])
            if abs(lhs - rhs) > tol * max(abs(lhs), abs(rhs), 1.0):
                ok = False
                break
        if ok:
            return omega
    return None


# -- types ------------------------------------------------------------------------

@dataclass(frozen=True)
class LFunction:
    """A polynomial L(u) with all roots on ``|u| = q**(-w/2)``.

    Build instances through :func:`validate_lfunction`; the constructor does
    no checking of its own.
    """

    q: int
    w: int
    coeffs: tuple[Fraction, ...]
    roots: tuple[Root, ...] = field(compare=False, repr=False)
    omega: int = field(compare=False, default=1)
    mode: str = field(compare=False, default=EXACT)
    label: str | None = field(compare=False, default=None)

    @property
    def d(self) -> int:
        return len(self.coeffs) - 1

    @property
    def radius(self) -> float:
        return self.q ** (-self.w / 2)

    def root_values(self) -> np.ndarray:
        """Roots repeated by multiplicity."""
        return np.array([r.value for r in self.roots for _ in range(r.multiplicity)], dtype=complex)

    def angles(self) -> np.ndarray:
        return np.array([r.theta for r in self.roots for _ in range(r.multiplicity)], dtype=float)

    def __call__(self, u):
        return qpoly.evaluate(self.coeffs, u)

    def to_record(self) -> dict:
        return {
            "label": self.label or "",
            "q": self.q,
            "w": self.w,
            "coeffs": [str(c) for c in self.coeffs],
        }


def validate_lfunction(
    q: int,
    w: int,
    coeffs: Iterable,
    mode: str = EXACT,
    rh_tol: float = DEFAULT_RH_TOL,
    label: str | None = None,
) -> LFunction:
    """Check the L-function axioms and return an LFunction with cached roots.

    ``mode="exact"`` certifies the Riemann hypothesis with Sturm chains;
    ``mode="numeric"`` checks root moduli against ``rh_tol`` (relative).
    """
    if mode not in (EXACT, NUMERIC):
        raise ValueError(f"unknown mode {mode!r}")
    prime_power(q)
    if not isinstance(w, int) or w < 0:
        raise ZetaLabError(f"weight must be a non-negative integer, got {w!r}", label)
    try:
        cs = qpoly.trim([to_fraction(c, allow_float=(mode == NUMERIC)) for c in coeffs])
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ZetaLabError(f"bad coefficient: {exc}", label) from exc
    if not cs or cs[0] != 1:
        raise BadConstantTerm(f"constant term must be 1, got {cs[0] if cs else 0}", label)

    radius = q ** (-w / 2)
    raw = compute_roots(q, w, cs)
    for z, _ in raw:
        if abs(abs(z) - radius) > rh_tol * radius:
            raise RHViolation(
                f"root {z:.12g} has modulus {abs(z):.12g}, expected {radius:.12g}", root=z, label=label
            )
    if mode == EXACT:
        ok, why = exact_rh_certificate(q, w, cs)
        if not ok:
            worst = max((z for z, _ in raw), key=lambda z: abs(abs(z) - radius), default=None)
            raise RHViolation(f"exact RH certificate failed: {why}", root=worst, label=label)
        omega = _root_number_exact(q, w, cs)
    else:
        omega = _root_number_numeric(q, w, cs, rh_tol)
    if omega is None:
        raise NotSelfInversive("functional equation fails for both signs", label)

    roots = [Root(z, m, _angle(z, radius)) for z, m in raw]
    roots.sort(key=lambda r: (r.theta, r.multiplicity))
    return LFunction(q=q, w=w, coeffs=tuple(cs), roots=tuple(roots), omega=omega, mode=mode, label=label)


def root_number(L: LFunction) -> int:
    """The sign omega in ``q**(w d/2) u**d L(1/(q**w u)) = omega L(u)``."""
    omega = _root_number_exact(L.q, L.w, list(L.coeffs))
    if omega is None:
        omega = _root_number_numeric(L.q, L.w, list(L.coeffs), DEFAULT_RH_TOL)
    if omega is None:
        raise NotSelfInversive("functional equation fails for both signs", L.label)
    return omega


# -- Dirichlet coefficients ---------------------------------------------------------

@dataclass(frozen=True)
class DirichletCoeffs:
    """Lambda_1..Lambda_F; ``values[0]`` is Lambda_1."""

    values: tuple[Fraction, ...]
    q: int
    w: int

    @property
    def F(self) -> int:
        return len(self.values)

    def __getitem__(self, f: int) -> Fraction:
        """1-based access: ``coeffs[f]`` is Lambda_f."""
        if f < 1:
            raise IndexError("Dirichlet coefficients are indexed from 1")
        return self.values[f - 1]

    def __len__(self) -> int:
        return len(self.values)


def lambdas_from_coeffs(coeffs: Sequence[Fraction], F: int) -> list[Fraction]:
    """Newton's identities: ``u L'(u) = L(u) * sum_f Lambda_f u**f``."""
    a = list(coeffs)
    lam: list[Fraction] = []
    for k in range(1, F + 1):
        ak = a[k] if k < len(a) else 0
        acc = Fraction(k) * ak
        for j in range(1, k):
            akj = a[k - j] if k - j < len(a) else 0
            if akj:
                acc -= lam[j - 1] * akj
        lam.append(acc)
    return lam


def coeffs_from_lambdas(lambdas: Sequence[Fraction], d: int) -> list[Fraction]:
    a = [Fraction(1)]
    for k in range(1, d + 1):
        acc = Fraction(lambdas[k - 1])
        for j in range(1, k):
            acc += lambdas[j - 1] * a[k - j]
        a.append(acc / k)
    return a


def lambda_coeffs(L: LFunction, F: int) -> DirichletCoeffs:
    if not isinstance(F, int) or F < 1:
        raise ValueError(f"truncation order must be >= 1, got {F!r}")
    return DirichletCoeffs(tuple(lambdas_from_coeffs(L.coeffs, F)), L.q, L.w)


def lfunction_from_lambdas(
    q: int,
    w: int,
    d: int,
    lambdas: Sequence,
    mode: str = EXACT,
    rh_tol: float = DEFAULT_RH_TOL,
    label: str | None = None,
) -> LFunction:
    """The unique degree-d polynomial with constant term 1 and these Lambda_1..Lambda_d."""
    if len(lambdas) != d:
        raise ValueError(f"expected exactly {d} Dirichlet coefficients, got {len(lambdas)}")
    lam = [to_fraction(x, allow_float=(mode == NUMERIC)) for x in lambdas]
    coeffs = coeffs_from_lambdas(lam, d)
    if d and coeffs[-1] == 0:
        raise RHViolation(f"reconstructed polynomial has degree < {d}", label=label)
    return validate_lfunction(q, w, coeffs, mode=mode, rh_tol=rh_tol, label=label)


# -- zeta functions ---------------------------------------------------------------

@dataclass(frozen=True)
class ZetaFunction:
    """Product of L-functions of distinct weights raised to signs +-1."""

    factors: tuple[tuple[LFunction, int], ...]
    label: str | None = field(compare=False, default=None)

    def __post_init__(self):
        weights = [L.w for L, _ in self.factors]
        if any(b <= a for a, b in zip(weights, weights[1:])):
            raise ZetaLabError("zeta factors need strictly increasing weights", self.label)
        if any(e not in (1, -1) for _, e in self.factors):
            raise ZetaLabError("zeta factor signs must be +-1", self.label)
        if len({L.q for L, _ in self.factors}) > 1:
            raise ZetaLabError("zeta factors must share q", self.label)

    @classmethod
    def of(cls, *factors: tuple[LFunction, int], label: str | None = None) -> "ZetaFunction":
        return cls(tuple(sorted(factors, key=lambda fe: fe[0].w)), label=label)

    @classmethod
    def single(cls, L: LFunction, eps: int = 1) -> "ZetaFunction":
        return cls(((L, eps),), label=L.label)

    @property
    def q(self) -> int:
        return self.factors[0][0].q if self.factors else 0

    @property
    def w(self) -> int:
        return self.factors[-1][0].w if self.factors else 0

    @property
    def d_tilde(self) -> int:
        return sum(L.d for L, _ in self.factors)

    def degrees(self) -> dict[int, int]:
        return {L.w: L.d for L, _ in self.factors}

    def signs(self) -> dict[int, int]:
        return {L.w: e for L, e in self.factors}

    def lambdas(self, F: int) -> list[Fraction]:
        out = [Fraction(0)] * F
        for L, eps in self.factors:
            for i, x in enumerate(lambdas_from_coeffs(L.coeffs, F)):
                out[i] += eps * x
        return out


# -- evaluation -------------------------------------------------------------------

def _check_not_root(L: LFunction, u: complex, s: complex) -> None:
    for r in L.roots:
        if abs(u - r.value) <= 1e-12 * abs(r.value):
            raise PoleOrZeroAt(s, L.label)


EVAL_DPS = 30


def _horner(L: LFunction, x):
    """L(x) and L'(x) as mpmath numbers; call inside a workdps context."""
    val = mpmath.mpc(0)
    der = mpmath.mpc(0)
    for c in reversed(L.coeffs):
        der = der * x + val
        val = val * x + mpmath.mpf(c.numerator) / c.denominator
    return val, der


def _factor_eval(L: LFunction, u: complex) -> tuple[complex, complex]:
    """L(u) and L'(u) from the exact coefficients.

    Horner runs in EVAL_DPS digits: large-degree polynomials lose many
    digits to cancellation in double precision.
    """
    with mpmath.workdps(EVAL_DPS):
        val, der = _horner(L, mpmath.mpc(u))
        return complex(val), complex(der)


def _log_derivative_term(L: LFunction, u: complex) -> complex:
    """u L'(u) / L(u), formed before rounding to double."""
    with mpmath.workdps(EVAL_DPS):
        x = mpmath.mpc(u)
        val, der = _horner(L, x)
        return complex(x * der / val)


def log_value(Z: ZetaFunction, s: complex) -> complex:
    """log zeta(s), principal branch per factor, summed.

    Used in the asymptotics only at real s to the right of the critical line,
    where no branch ambiguity arises.
    """
    total = 0j
    for L, eps in Z.factors:
        u = complex(L.q) ** (-complex(s))
        _check_not_root(L, u, s)
        val, _ = _factor_eval(L, u)
        if val == 0:
            raise PoleOrZeroAt(s, L.label)
        total += eps * cmath.log(val)
    return total


def log_derivative(Z: ZetaFunction, s: complex) -> complex:
    """d/ds log zeta(s) = -log q * sum eps_i u L_i'(u)/L_i(u)."""
    total = 0j
    for L, eps in Z.factors:
        u = complex(L.q) ** (-complex(s))
        _check_not_root(L, u, s)
        total += eps * _log_derivative_term(L, u)
    return -math.log(Z.q) * total


# -- explicit formulae ---------------------------------------------------------------

@dataclass(frozen=True)
class TrigPolynomial:
    """Even trigonometric polynomial ``v0 + 2 * sum_n v_n cos(n theta)``."""

    v: tuple[float, ...]

    def __post_init__(self):
        if not self.v:
            raise ValueError("trigonometric polynomial needs at least v_0")
        if not all(math.isfinite(x) for x in self.v):
            raise ValueError("trigonometric polynomial coefficients must be finite")

    @property
    def Y(self) -> int:
        return len(self.v) - 1

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.full(theta.shape, self.v[0], dtype=float)
        for n in range(1, len(self.v)):
            out = out + 2.0 * self.v[n] * np.cos(n * theta)
        return out


def explicit_formula_series(Z: ZetaFunction, v, t: float) -> tuple[float, float]:
    """Both sides of ``sum_f Lambda_f v_f t**f = -sum_i eps_i sum_j psi_v(q**i rho_ij t)``.

    ``v`` is the finitely supported sequence v_1..v_F.
    """
    if not isinstance(v, (list, tuple, np.ndarray)):
        raise RadiusExceeded("only finitely supported test sequences are supported")
    v = [float(x) for x in v]
    F = len(v)
    lam = Z.lambdas(F)
    lhs = sum(float(lam[f]) * v[f] * t ** (f + 1) for f in range(F))
    psi = np.polynomial.Polynomial([0.0] + v)
    rhs = 0.0 + 0.0j
    for L, eps in Z.factors:
        x = (L.q ** L.w) * L.root_values() * t
        rhs -= eps * complex(np.sum(psi(x)))
    return lhs, rhs.real


def explicit_formula_trig(L: LFunction, f: TrigPolynomial) -> tuple[float, float]:
    """``sum_theta f(theta) = v_0 d - 2 sum_n v_n Lambda_n q**(-w n/2)``."""
    lhs = float(np.sum(f(L.angles())))
    lam = lambdas_from_coeffs(L.coeffs, max(f.Y, 1))
    rhs = f.v[0] * L.d
    for n in range(1, f.Y + 1):
        rhs -= 2.0 * f.v[n] * float(lam[n - 1]) * L.q ** (-L.w * n / 2)
    return lhs, rhs


@dataclass(frozen=True)
class StarkResult:
    lhs: complex          # (1/log q) zeta'/zeta from the coefficients
    mid: complex          # sum eps / (q^s rho - 1) from the roots
    rhs: complex          # symmetric sum over zero translates, tail-corrected
    rhs_partial: complex  # the same sum without tail correction
    K: int
    residual: float       # |mid - rhs|
    partial_residual: float
    tail_bound: float     # bound on |mid - rhs_partial|, of the form C/K


def stark_identity(Z: ZetaFunction, s: complex, K: int = DEFAULT_STARK_K) -> StarkResult:
    """The three expressions of the Stark formula at s.

    The third one sums ``1/(s - theta)`` over the zeros ``theta`` of each
    factor in the s-plane (``q**-theta = rho``), taking the translates
    ``theta + 2 pi i k / log q`` for ``|k| <= K``. The partial sum converges
    like 1/K; ``rhs`` adds the midpoint-rule integral of the remaining tail,
    which leaves an O(1/K**3) error.
    """
    s = complex(s)
    logq = math.log(Z.q)
    a = 2 * math.pi / logq
    lhs = log_derivative(Z, s) / logq
    mid = 0j
    const = 0.0
    partial = 0j
    tail = 0j
    bound = 0.0
    ks = np.arange(1, K + 1, dtype=float)
    for L, eps in Z.factors:
        u = complex(L.q) ** (-s)
        _check_not_root(L, u, s)
        rho = L.root_values()
        if rho.size == 0:
            continue
        mid += eps * complex(np.sum(1.0 / (complex(L.q) ** s * rho - 1.0)))
        const -= 0.5 * eps * L.d
        z = s + np.log(rho) / logq          # s - theta with theta = -log(rho)/log q
        pair = 2 * z[:, None] / (z[:, None] ** 2 + (a * ks[None, :]) ** 2)
        partial += eps * complex(np.sum(1.0 / z) + np.sum(pair)) / logq
        T = K + 0.5
        tail += eps * complex(np.sum((2 / a) * np.arctan(z / (a * T)))) / logq
        bound += float(np.sum(4 * np.abs(z))) / (a * a * K * logq)
    rhs_partial = const + partial
    rhs = rhs_partial + tail
    return StarkResult(
        lhs=lhs,
        mid=mid,
        rhs=rhs,
        rhs_partial=rhs_partial,
        K=K,
        residual=abs(mid - rhs),
        partial_residual=abs(mid - rhs_partial),
        tail_bound=bound,
    )


# -- serialization ------------------------------------------------------------------

def lfunction_from_record(rec: dict, mode: str = EXACT, rh_tol: float = DEFAULT_RH_TOL) -> LFunction:
    """Parse ``{"label", "q", "w", "coeffs": [exact rationals as strings]}``."""
    label = rec.get("label")
    try:
        q, w, coeffs = int(rec["q"]), int(rec["w"]), rec["coeffs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ZetaLabError(f"malformed L-function record: {exc}", label) from exc
    if not isinstance(coeffs, list):
        raise ZetaLabError("coeffs must be a list", label)
    for c in coeffs:
        if isinstance(c, (dict, list, bool)) or (isinstance(c, float) and mode == EXACT):
            raise ZetaLabError(f"coefficient {c!r} is not an exact rational", label)
    return validate_lfunction(q, w, coeffs, mode=mode, rh_tol=rh_tol, label=label)


def roots_csv(L: LFunction) -> str:
    lines = ["theta,multiplicity"]
    lines += [f"{r.theta:.12g},{r.multiplicity}" for r in L.roots]
    return "\n".join(lines) + "\n"
