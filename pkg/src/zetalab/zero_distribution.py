"""Distribution of Frobenius angles.

A zero measure has total mass 1: each root contributes multiplicity/d at its
angle theta in (-pi, pi]. Densities are normalized so that (1/2pi) times
their integral over (-pi, pi] is 1, which makes the m-th Fourier cosine
coefficient of a density comparable with the m-th moment of a measure.

Moment convention: with Lambda_m defined by log L = sum Lambda_m u^m / m,

    d * moment(mu_L, m) = sum_k cos(m theta_k) = -Lambda_m q^(-wm/2),

equivalently sum_k 2 cos(m theta_k) = -2 Lambda_m q^(-wm/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import lfun_core as lf
from .asymptotics import CONV_TOL, central_data

GRID_POINTS = 4096


@dataclass(frozen=True)
class ZeroMeasure:
    angles: tuple  # (theta, multiplicity), sorted
    d: int
    label: str | None = None

    def thetas(self) -> np.ndarray:
        return np.array([t for t, m in self.angles for _ in range(m)], dtype=float)

    def weights(self) -> tuple[np.ndarray, np.ndarray]:
        th = np.array([t for t, _ in self.angles], dtype=float)
        wt = np.array([m for _, m in self.angles], dtype=float)
        return th, wt

    def is_symmetric(self, tol: float = 1e-9) -> bool:
        rest = [(t, m) for t, m in self.angles if tol < abs(t) < math.pi - tol]
        for t, m in rest:
            if not any(abs(t + u) <= tol and m == n for u, n in rest):
                return False
        return True


def zero_measure(L: lf.LFunction) -> ZeroMeasure:
    return ZeroMeasure(tuple((r.theta, r.multiplicity) for r in L.roots), L.d, L.label)


def moment(mu: ZeroMeasure, m: int) -> float:
    """(1/d) sum_k mult_k cos(m theta_k); 1 for m = 0."""
    if m < 0:
        raise ValueError("moment order must be >= 0")
    if m == 0 or mu.d == 0:
        return 1.0
    th, wt = mu.weights()
    return float(np.dot(wt, np.cos(m * th)) / mu.d)


def sine_moment(mu: ZeroMeasure, m: int) -> float:
    if mu.d == 0:
        return 0.0
    th, wt = mu.weights()
    return float(np.dot(wt, np.sin(m * th)) / mu.d)


def moment_pairing(L: lf.LFunction, m: int) -> tuple[float, float]:
    """(sum_k 2 cos(m theta_k), -2 Lambda_m q^(-wm/2)); the two agree for m >= 1."""
    lhs, rhs = moment_pairings(L, m)
    return float(lhs[-1]), float(rhs[-1])


def moment_pairings(L: lf.LFunction, M: int) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of the moment pairing for m = 1..M."""
    if M < 1:
        raise ValueError("moment order must be >= 1")
    lam = lf.lambdas_from_coeffs(L.coeffs, M)
    th, wt = zero_measure(L).weights()
    ms = np.arange(1, M + 1)
    lhs = 2 * (np.cos(np.outer(ms, th)) @ wt) if len(th) else np.zeros(M)
    rhs = np.array([-2 * float(x) * L.q ** (-L.w * m / 2) for m, x in enumerate(lam, start=1)])
    return lhs, rhs


# -- densities -----------------------------------------------------------------------

@dataclass(frozen=True)
class DensitySamples:
    x: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    F: int
    tail_bound: float
    formal: bool = False  # True when the very exact hypothesis was not available
    cos_coeffs: tuple | None = field(default=None, repr=False)  # M = 1 + sum c_k cos(kx), if known

    @property
    def minimum(self) -> float:
        return float(self.values.min())

    def nonnegative(self, factor: float = 2.0) -> bool:
        return self.minimum >= -factor * self.tail_bound - 1e-12

    def fourier_cos(self, m: int) -> float:
        """(1/2pi) int M(x) cos(mx) dx by the periodic trapezoid rule."""
        return float(np.mean(self.values * np.cos(m * self.x)))

    def bin_mass(self, lo: float, hi: float) -> float:
        """(1/2pi) int_lo^hi M(x) dx."""
        if self.cos_coeffs is not None:
            def prim(t):
                return t + sum(c * math.sin(k * t) / k for k, c in enumerate(self.cos_coeffs, start=1))
            return (prim(hi) - prim(lo)) / (2 * math.pi)
        sub = np.linspace(lo, hi, 257)
        vals = np.interp(sub, np.append(self.x, self.x[0] + 2 * math.pi), np.append(self.values, self.values[0]))
        integral = float(np.sum((vals[1:] + vals[:-1]) * np.diff(sub)) / 2)
        return integral / (2 * math.pi)

    def rows(self) -> list[tuple[float, float]]:
        return list(zip(self.x.tolist(), self.values.tolist()))


def default_grid(M: int = GRID_POINTS) -> np.ndarray:
    return np.linspace(-math.pi, math.pi, M, endpoint=False)


def limit_density(
    lam: Sequence[float],
    q: int,
    w: int,
    grid: np.ndarray | None = None,
    tail_bound: float = 0.0,
    very_exact: bool = True,
) -> DensitySamples:
    """M(x) = 1 - 2 sum_k lambda_k cos(kx) q^(-wk/2), truncated at F = len(lam)."""
    x = default_grid() if grid is None else np.asarray(grid, dtype=float)
    coeffs = tuple(-2 * float(l) * q ** (-w * k / 2) for k, l in enumerate(lam, start=1))
    vals = np.ones_like(x)
    for k, c in enumerate(coeffs, start=1):
        vals += c * np.cos(k * x)
    return DensitySamples(x, vals, len(lam), float(tail_bound), not very_exact, coeffs)


def h_k(k: int, q: int, x):
    t = q ** (k / 2)
    c = np.cos(k * np.asarray(x, dtype=float))
    return (t * c - 1) / (q**k + 1 - 2 * t * c)


def curve_tail_budget(phi: Sequence[float], q: int) -> float:
    """1 - sum_k k phi_k / (q^(k/2) - 1), the room the basic inequality leaves for k > F."""
    return 1 - sum(k * p / (q ** (k / 2) - 1) for k, p in enumerate(phi, start=1))


def curve_limit_density(phi: Sequence[float], q: int, grid: np.ndarray | None = None) -> DensitySamples:
    """M(x) = 1 - sum_k k phi_k h_k(x), phi_k the limit of Phi_k / g.

    Since |h_k| <= 1/(q^(k/2) - 1), the omitted terms k > F are bounded by
    the budget the basic inequality leaves (zero if the data overspend it).
    """
    x = default_grid() if grid is None else np.asarray(grid, dtype=float)
    vals = np.ones_like(x)
    for k, p in enumerate(phi, start=1):
        vals -= k * p * h_k(k, q, x)
    tail = max(curve_tail_budget(phi, q), 0.0)
    return DensitySamples(x, vals, len(phi), tail, False, None)


def lambdas_from_phi(phi: Sequence[float], F: int | None = None) -> list[float]:
    """lambda_f = (1/2) sum_{m | f} m phi_m (2g-normalized, weight 1)."""
    F = len(phi) if F is None else F
    return [sum(m * phi[m - 1] for m in range(1, min(f, len(phi)) + 1) if f % m == 0) / 2 for f in range(1, F + 1)]


def curve_density_gap_bound(phi: Sequence[float], q: int) -> float:
    """Bound on |curve_limit_density - limit_density(lambdas_from_phi)| for the same phi.

    The first sums the geometric series over l for every m <= F, the second
    stops at l m <= F; the difference is the omitted l.
    """
    F = len(phi)
    total = 0.0
    for m, p in enumerate(phi, start=1):
        first = F // m + 1
        total += m * p * q ** (-first * m / 2) / (1 - q ** (-m / 2))
    return total


def family_cosine_inequalities(lam: Sequence[float], q: int, w: int, x) -> np.ndarray:
    """1/2 - sum_k lambda_k cos(kx) q^(-wk/2), i.e. half the limit density."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    s = np.zeros_like(x)
    for k, l in enumerate(lam, start=1):
        s += float(l) * np.cos(k * x) * q ** (-w * k / 2)
    return 0.5 - s


# -- histograms -----------------------------------------------------------------------

@dataclass(frozen=True)
class HistogramResult:
    edges: tuple
    empirical: tuple  # last measure
    predicted: tuple
    max_deviation: tuple  # per measure
    warnings: tuple = ()

    def rows(self) -> list[tuple[float, float, float, float]]:
        return [
            (self.edges[i], self.edges[i + 1], self.empirical[i], self.predicted[i]) for i in range(len(self.empirical))
        ]


def bin_masses(mu: ZeroMeasure, edges: np.ndarray) -> np.ndarray:
    """Mass in each bin (lo, hi]; theta = pi lands in the last bin."""
    th, wt = mu.weights()
    idx = np.searchsorted(edges, th, side="left") - 1
    idx = np.clip(idx, 0, len(edges) - 2)
    out = np.zeros(len(edges) - 1)
    np.add.at(out, idx, wt)
    return out / max(mu.d, 1)


def histogram_compare(measures: Sequence[ZeroMeasure], density: DensitySamples, bins: int) -> HistogramResult:
    if not measures:
        raise ValueError("need at least one measure")
    if bins < 1:
        raise ValueError("need at least one bin")
    edges = np.linspace(-math.pi, math.pi, bins + 1)
    predicted = np.array([density.bin_mass(edges[i], edges[i + 1]) for i in range(bins)])
    devs, emp = [], None
    for mu in measures:
        emp = bin_masses(mu, edges)
        devs.append(float(np.max(np.abs(emp - predicted))))
    warnings = []
    if bins > measures[-1].d / 2:
        warnings.append(f"BinTooFine: {bins} bins for {measures[-1].d} angles")
    return HistogramResult(
        tuple(edges.tolist()), tuple(emp.tolist()), tuple(predicted.tolist()), tuple(devs), tuple(warnings)
    )


# -- central multiplicities --------------------------------------------------------------

@dataclass(frozen=True)
class RankRatios:
    ranks: tuple
    d_tildes: tuple
    ratios: tuple
    trend_ok: bool


def rank_ratio(zetas: Sequence[lf.ZetaFunction], w_e: int) -> RankRatios:
    """r_k / d_tilde_k with r_k the order at s = w_e/2; soft trend check on the last half."""
    ranks, dts = [], []
    for Z in zetas:
        ranks.append(central_data(Z, w_e).r)
        dts.append(Z.d_tilde)
    ratios = [r / d for r, d in zip(ranks, dts)]
    n = len(ratios)
    first, last = ratios[: max(1, n // 2)], ratios[n // 2 :]
    trend_ok = max(last) < CONV_TOL or (max(last) < max(first) and ratios[-1] <= min(first))
    return RankRatios(tuple(ranks), tuple(dts), tuple(ratios), trend_ok)


def central_multiplicity(L: lf.LFunction) -> int:
    """Multiplicity of the angle 0 in the root list."""
    return sum(r.multiplicity for r in L.roots if abs(r.theta) < 1e-9)
