"""Families of zeta functions and their limits.

A family is a sequence of zeta functions over a fixed F_q with a fixed sign
vector. From it we estimate the normalized degrees delta_i = d_i / d_tilde
and coefficients lambda_f = Lambda_f / d_tilde (last member, with the spread
over the last half of the sequence as a convergence diagnostic), split off
the negligible weights, and evaluate the inequalities and limit objects
built from these numbers.

Two normalizations appear. ``lam`` divides by the total degree d_tilde.
``lam_e`` divides the essential part by its own degree; it has the same
limit, and for each individual member it makes the finite forms of the
inequalities hold exactly. For curves d_tilde_e = 2g, so ``lam_e`` is the
2g-normalization and phi_f = Phi_f / g is twice it.

All verdicts here are diagnostics computed from finitely many members.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import lfun_core as lf
from . import qpoly
from .errors import (
    AllNegligible,
    DomainError,
    HypothesisNotMet,
    MissingSection,
    NegativePhi,
    SOutOfRange,
    TooFewMembers,
    ZetaLabError,
)

CONV_TOL = 1e-3
EVAL_TOL = 1e-9
MAX_F = 64
GROWTH_SLOPE = 0.5
VERY_EXACT_MARGIN = 0.1

EXACT, NOT_EXACT = "exact", "not_exact"
BAD, GOOD = "bad", "good"
VERY_EXACT, INCONCLUSIVE, NOT_VERY_EXACT = "very_exact", "inconclusive", "not_very_exact"


# -- family records ------------------------------------------------------------------

@dataclass(frozen=True)
class MemberSummary:
    """One member: degrees per weight and Dirichlet coefficients to depth F.

    ``parts`` maps weight -> signed contribution eps_i * Lambda_f(L_i); it is
    None for summary records that only carry the total.
    """

    d_tilde: int
    degrees: dict
    signs: dict
    lambdas: tuple
    parts: dict | None = None
    zeta: lf.ZetaFunction | None = field(default=None, repr=False, compare=False)
    label: str | None = None

    def essential_degree(self, I: Iterable[int]) -> int:
        return sum(d for w, d in self.degrees.items() if w not in set(I))

    def essential_lambdas(self, I: Iterable[int]) -> tuple:
        if self.parts is None:
            return self.lambdas
        I = set(I)
        F = len(self.lambdas)
        return tuple(sum((p[f] for w, p in self.parts.items() if w not in I), Fraction(0)) for f in range(F))


def summarize(Z: lf.ZetaFunction, F: int) -> MemberSummary:
    parts = {}
    for L, eps in Z.factors:
        parts[L.w] = tuple(eps * x for x in lf.lambdas_from_coeffs(L.coeffs, F))
    total = tuple(sum((p[f] for p in parts.values()), Fraction(0)) for f in range(F))
    return MemberSummary(Z.d_tilde, Z.degrees(), Z.signs(), total, parts, Z, Z.label)


@dataclass(frozen=True)
class FamilyRecord:
    members: tuple
    F: int
    q: int
    w: int
    signs: dict

    def __len__(self) -> int:
        return len(self.members)

    @property
    def weights(self) -> list[int]:
        return sorted({w for m in self.members for w in m.degrees})


def default_depth(d_tildes: Sequence[int]) -> int:
    """2 * max / min of the total degrees, capped at MAX_F."""
    lo = max(min(d_tildes), 1)
    return max(1, min(MAX_F, math.ceil(2 * max(d_tildes) / lo)))


def family_from_zetas(zetas: Sequence[lf.ZetaFunction], F: int | None = None) -> FamilyRecord:
    if not zetas:
        raise TooFewMembers("empty family")
    if F is None:
        F = default_depth([Z.d_tilde for Z in zetas])
    return _assemble([summarize(Z, F) for Z in zetas], F, zetas[0].q)


def _assemble(members: list[MemberSummary], F: int, q: int) -> FamilyRecord:
    signs = dict(members[0].signs)
    for m in members:
        for w, e in m.signs.items():
            if signs.setdefault(w, e) != e:
                raise ZetaLabError(f"member {m.label or ''} has a different sign at weight {w}")
        if len(m.lambdas) < F:
            raise ZetaLabError(f"member {m.label or ''} has only {len(m.lambdas)} coefficients, need {F}")
    w = max(w for m in members for w in m.degrees)
    return FamilyRecord(tuple(members), F, q, w, signs)


def family_from_records(records: Sequence[dict], F: int | None = None, mode: str = lf.EXACT) -> FamilyRecord:
    """Family file entries: L-function records, zeta records or summary records.

    zeta record:    {"label", "factors": [{"q", "w", "coeffs", "eps"}, ...]}
    summary record: {"q", "d_tilde", "degrees": [d_0, d_1, ..], "lambdas": [..], "signs": [..]}
    (summary degrees and signs are indexed by weight).
    """
    zetas, summaries, q = [], [], None
    for i, rec in enumerate(records):
        label = rec.get("label") or f"member{i}"
        if "lambdas" in rec and "d_tilde" in rec:
            degs = {w: int(d) for w, d in enumerate(rec["degrees"]) if int(d)}
            sg = rec.get("signs") or [1] * len(rec["degrees"])
            signs = {w: int(sg[w]) for w in degs}
            lam = tuple(lf.to_fraction(x, allow_float=True) for x in rec["lambdas"])
            summaries.append(MemberSummary(int(rec["d_tilde"]), degs, signs, lam, None, None, label))
            q = q or int(rec.get("q", 0)) or None
        elif "factors" in rec:
            facs = []
            for fr in rec["factors"]:
                L = lf.lfunction_from_record(dict(fr, label=label), mode=mode)
                facs.append((L, int(fr.get("eps", 1))))
            zetas.append(lf.ZetaFunction.of(*facs, label=label))
        else:
            L = lf.lfunction_from_record(dict(rec, label=label), mode=mode)
            zetas.append(lf.ZetaFunction.of((L, int(rec.get("eps", 1))), label=label))
    if zetas and summaries:
        raise ZetaLabError("a family file must not mix summary records with zeta records")
    if zetas:
        return family_from_zetas(zetas, F)
    if not summaries:
        raise TooFewMembers("empty family")
    if q is None:
        raise ZetaLabError("summary records need a field 'q'")
    if F is None:
        F = min(len(m.lambdas) for m in summaries)
    return _assemble(summaries, F, q)


# -- limit estimation ------------------------------------------------------------------

def _estimate(seq: Sequence[float]) -> tuple[float, float]:
    """Last value and the largest successive difference over the last half."""
    n = len(seq)
    start = max(1, n // 2)
    diffs = [abs(seq[k] - seq[k - 1]) for k in range(start, n)]
    return float(seq[-1]), max(diffs, default=0.0)


def _growth_slope(d_tildes: Sequence[int], degs: Sequence[int]) -> float | None:
    """Slope of log d_i against log d_tilde over the last half; None if undefined."""
    n = len(degs)
    pts = [(math.log(t), math.log(d)) for t, d in zip(d_tildes[n // 2 :], degs[n // 2 :]) if d > 0 and t > 0]
    if len(pts) < 2 or len({x for x, _ in pts}) < 2:
        return None
    x, y = np.array(pts).T
    return float(np.polyfit(x, y, 1)[0])


@dataclass(frozen=True)
class VeryExactReport:
    verdict: str
    terms: tuple
    partial_sums: tuple
    ratio: float | None
    tail_estimate: float | None


@dataclass(frozen=True)
class AsymptoticData:
    q: int
    w: int
    F: int
    signs: dict
    delta: dict
    delta_diag: dict
    lam: tuple
    lam_diag: tuple
    lam_e: tuple
    lam_e_diag: tuple
    I: frozenset
    w_e: int | None
    exact: bool
    bad: bool
    very: VeryExactReport
    warnings: tuple = ()

    @property
    def classification(self) -> tuple[str, str, str]:
        return (EXACT if self.exact else NOT_EXACT, BAD if self.bad else GOOD, self.very.verdict)

    def to_record(self) -> dict:
        return {
            "classification": list(self.classification),
            "delta": {str(w): v for w, v in sorted(self.delta.items())},
            "delta_diagnostic": {str(w): v for w, v in sorted(self.delta_diag.items())},
            "lambda": list(self.lam),
            "lambda_diagnostic": list(self.lam_diag),
            "lambda_essential": list(self.lam_e),
            "negligible": sorted(self.I),
            "w_e": self.w_e,
            "very_exact": {
                "verdict": self.very.verdict,
                "partial_sums": list(self.very.partial_sums),
                "ratio": self.very.ratio,
                "tail_estimate": self.very.tail_estimate,
            },
            "warnings": list(self.warnings),
        }


def estimate_limits(fam: FamilyRecord, conv_tol: float = CONV_TOL) -> AsymptoticData:
    if len(fam) < 4:
        raise TooFewMembers(f"need at least 4 members, got {len(fam)}")
    members = fam.members
    dts = [m.d_tilde for m in members]
    warnings = []
    half = dts[len(dts) // 2 :]
    if max(half) < 2 * min(half):
        warnings.append("total degree grows by less than a factor 2 over the last half of the family")

    delta, delta_diag, I = {}, {}, set()
    for w in fam.weights:
        degs = [m.degrees.get(w, 0) for m in members]
        raw = [d / t for d, t in zip(degs, dts)]
        value, diag = _estimate(raw)
        slope = _growth_slope(dts, degs)
        if value < conv_tol or (slope is not None and slope <= GROWTH_SLOPE):
            I.add(w)
            value = 0.0
        delta[w], delta_diag[w] = value, diag
    essential = [w for w in fam.weights if w not in I]
    w_e = max(essential) if essential else None

    lam, lam_diag = [], []
    for f in range(fam.F):
        v, dg = _estimate([float(m.lambdas[f]) / m.d_tilde for m in members])
        lam.append(v)
        lam_diag.append(dg)
    lam_e, lam_e_diag = [], []
    for f in range(fam.F):
        seq = []
        for m in members:
            de = m.essential_degree(I) if m.parts is not None else m.d_tilde
            seq.append(float(m.essential_lambdas(I)[f]) / de if de else 0.0)
        v, dg = _estimate(seq)
        lam_e.append(v)
        lam_e_diag.append(dg)

    exact = all(d < conv_tol for d in lam_diag) and all(
        delta_diag[w] < conv_tol for w in fam.weights if w not in I
    )
    bad = all(abs(x) < conv_tol for x in lam)
    if not exact:
        warnings.append("limits did not settle within conv_tol; values are last-member estimates")
    very = very_exact_check(lam_e, fam.q, w_e if w_e is not None else fam.w, conv_tol=conv_tol)
    return AsymptoticData(
        q=fam.q,
        w=fam.w,
        F=fam.F,
        signs=dict(fam.signs),
        delta=delta,
        delta_diag=delta_diag,
        lam=tuple(lam),
        lam_diag=tuple(lam_diag),
        lam_e=tuple(lam_e),
        lam_e_diag=tuple(lam_e_diag),
        I=frozenset(I),
        w_e=w_e,
        exact=exact,
        bad=bad,
        very=very,
        warnings=tuple(warnings),
    )


def very_exact_check(
    lam: Sequence[float], q: int, w_e: int, margin: float = VERY_EXACT_MARGIN, conv_tol: float = CONV_TOL
) -> VeryExactReport:
    """Decay diagnostic for sum |lambda_f| q^(-f w_e / 2).

    The verdict looks at the terms over the last half: a fitted geometric
    ratio below 1 - margin (or terms already below conv_tol) reads as
    very exact, terms staying above conv_tol without decay as not very
    exact. Finite data can never prove either.
    """
    terms = [abs(x) * q ** (-(f + 1) * w_e / 2) for f, x in enumerate(lam)]
    partial = list(np.cumsum(terms)) if terms else []
    tail = terms[len(terms) // 2 :]
    if not tail or max(tail) < conv_tol:
        return VeryExactReport(VERY_EXACT, tuple(terms), tuple(float(x) for x in partial), 0.0, 0.0)
    pts = [(f, math.log(t)) for f, t in enumerate(terms) if f >= len(terms) // 2 and t > 0]
    ratio = None
    if len(pts) >= 2:
        x, y = np.array(pts).T
        ratio = float(math.exp(np.polyfit(x, y, 1)[0]))
    if ratio is not None and ratio < 1 - margin:
        verdict = VERY_EXACT
        tail_est = terms[-1] * ratio / (1 - ratio)
    elif min(tail) > conv_tol:
        verdict, tail_est = NOT_VERY_EXACT, math.inf
    else:
        verdict, tail_est = INCONCLUSIVE, None
    return VeryExactReport(verdict, tuple(terms), tuple(float(x) for x in partial), ratio, tail_est)


# -- essential part ------------------------------------------------------------------

@dataclass(frozen=True)
class EssentialSplit:
    I: frozenset
    w_e: int
    max_gap: float  # over members and f: |lambda(full) - lambda(essential)| minus its bound
    ok: bool


def essential_split(fam: FamilyRecord, data: AsymptoticData, tol: float = EVAL_TOL) -> EssentialSplit:
    """Negligible weights and the coefficient check for each member.

    |Lambda_f(full) - Lambda_f(essential)| / d_tilde is bounded by
    (sum over negligible i of d_i / d_tilde) * q^(f w / 2).
    """
    if data.w_e is None:
        raise AllNegligible("every weight is negligible")
    worst = -math.inf
    for m in fam.members:
        if m.parts is None:
            continue
        ess = m.essential_lambdas(data.I)
        neg_share = sum(m.degrees.get(w, 0) for w in data.I) / m.d_tilde
        for f in range(fam.F):
            gap = abs(float(m.lambdas[f] - ess[f])) / m.d_tilde
            bound = neg_share * fam.q ** ((f + 1) * fam.w / 2)
            worst = max(worst, gap - bound)
    if worst == -math.inf:
        worst = 0.0
    return EssentialSplit(data.I, data.w_e, worst, worst <= tol * max(1.0, fam.q ** (fam.F * fam.w / 2)))


# -- basic inequalities ---------------------------------------------------------------

def drinfeld_slack(L: lf.LFunction, b: int):
    """d(b+1) - 2 sum_{j<=b} (b+1-j) Lambda_j q^(-wj/2); nonnegative for every L-function.

    Exact (a Fraction) when q^(w/2) is rational, a float otherwise.
    """
    lam = lf.lambdas_from_coeffs(L.coeffs, b)
    hp = lf.half_power(L.q, L.w)
    if hp is not None:
        total = Fraction(L.d * (b + 1))
        for j in range(1, b + 1):
            total -= 2 * (b + 1 - j) * lam[j - 1] / hp**j
        return total
    total = float(L.d * (b + 1))
    for j in range(1, b + 1):
        total -= 2 * (b + 1 - j) * float(lam[j - 1]) * L.q ** (-L.w * j / 2)
    return total


@dataclass(frozen=True)
class BasicInequalityL:
    b: int
    lhs: float
    slack: float
    infinite_lhs: float | None
    infinite_slack: float | None


def basic_inequality_L(data: AsymptoticData, b: int) -> BasicInequalityL:
    """sum_{j<=b} (1 - j/(b+1)) lambda_j q^(-wj/2) <= 1/2 for a pure-weight family."""
    essential = [w for w in data.delta if w not in data.I]
    if len(essential) != 1:
        raise HypothesisNotMet(f"essential part has weights {essential}, need exactly one")
    if b < 1 or b > data.F:
        raise HypothesisNotMet(f"b={b} must lie in 1..F={data.F}")
    w = essential[0]
    lam = data.lam_e
    lhs = sum((1 - j / (b + 1)) * lam[j - 1] * data.q ** (-w * j / 2) for j in range(1, b + 1))
    inf_lhs = inf_slack = None
    if data.very.verdict == VERY_EXACT or all(x >= 0 for x in lam):
        inf_lhs = sum(lam[j - 1] * data.q ** (-w * j / 2) for j in range(1, data.F + 1))
        inf_slack = 0.5 - inf_lhs
    return BasicInequalityL(b, lhs, 0.5 - lhs, inf_lhs, inf_slack)


@dataclass(frozen=True)
class BasicInequalityZeta:
    s: float
    lower: float
    mid: float
    upper: float
    tail_bound: float

    @property
    def holds(self) -> bool:
        pad = self.tail_bound + EVAL_TOL
        return self.lower - pad <= self.mid <= self.upper + pad


def basic_inequality_zeta(data: AsymptoticData, s: float) -> BasicInequalityZeta:
    """lower <= sum_j lambda_j q^(-sj) <= upper for w_e/2 < s < (w_e+1)/2.

    Uses the essential weights with delta_i renormalized to sum to 1 and
    the essentially-normalized coefficients, so the ordering also holds
    for a single member; the truncation tail is bounded with
    |lambda_j| <= sum_i delta_i q^(ij/2).
    """
    if data.w_e is None:
        raise AllNegligible("every weight is negligible")
    if not (data.w_e / 2 < s < (data.w_e + 1) / 2):
        raise SOutOfRange(f"s={s} outside ({data.w_e / 2}, {(data.w_e + 1) / 2})")
    q = data.q
    ess = {w: d for w, d in data.delta.items() if w not in data.I}
    total = sum(ess.values())
    ess = {w: d / total for w, d in ess.items()} if total > 0 else ess
    lower = -sum(d / (q ** (s - w / 2) - data.signs.get(w, 1)) for w, d in ess.items())
    upper = sum(d / (q ** (s - w / 2) + data.signs.get(w, 1)) for w, d in ess.items())
    mid = sum(x * q ** (-s * j) for j, x in enumerate(data.lam_e, start=1))
    tail = 0.0
    for w, d in ess.items():
        r = q ** (-(s - w / 2))
        tail += d * r ** (data.F + 1) / (1 - r)
    return BasicInequalityZeta(s, lower, mid, upper, tail)


def basic_inequality_zeta_member(m: MemberSummary, q: int, I: Iterable[int], s: float) -> BasicInequalityZeta:
    """The same ordering for one member, with exact per-member delta and lambda."""
    I = set(I)
    de = m.essential_degree(I)
    w_e = max(w for w in m.degrees if w not in I)
    data = AsymptoticData(
        q=q,
        w=max(m.degrees),
        F=len(m.lambdas),
        signs=dict(m.signs),
        delta={w: d / de for w, d in m.degrees.items() if w not in I},
        delta_diag={},
        lam=(),
        lam_diag=(),
        lam_e=tuple(float(x) / de for x in m.essential_lambdas(I)),
        lam_e_diag=(),
        I=frozenset(),
        w_e=w_e,
        exact=True,
        bad=False,
        very=VeryExactReport(INCONCLUSIVE, (), (), None, None),
    )
    return basic_inequality_zeta(data, s)


# -- limit zeta ----------------------------------------------------------------------

@dataclass(frozen=True)
class LimitZeta:
    q: int
    w_e: int
    lam: tuple
    very_exact: bool = False
    empirical_tail: float | None = None


def limit_zeta(data: AsymptoticData) -> LimitZeta:
    if data.w_e is None:
        raise AllNegligible("every weight is negligible")
    return LimitZeta(data.q, data.w_e, data.lam_e, data.very.verdict == VERY_EXACT, data.very.tail_estimate)


def limit_log_zeta(LZ: LimitZeta, s: complex) -> tuple[complex, float, bool]:
    """(sum_{f<=F} lambda_f/f q^(-fs), tail bound, whether the bound is rigorous)."""
    sigma = complex(s).real
    F = len(LZ.lam)
    value = sum(x / f * complex(LZ.q) ** (-f * complex(s)) for f, x in enumerate(LZ.lam, start=1)) + 0j
    excess = sigma - LZ.w_e / 2
    if excess > 0:
        r = LZ.q ** (-excess)
        tail = r ** (F + 1) / ((F + 1) * (1 - r))
        return value, tail, True
    if excess == 0 and LZ.very_exact:
        return value, float(LZ.empirical_tail or 0.0), False
    raise DomainError(f"Re s = {sigma} is left of w_e/2 = {LZ.w_e / 2}" + ("" if excess else " and the family is not very exact"))


def essential_zeta(Z: lf.ZetaFunction, I: Iterable[int]) -> lf.ZetaFunction:
    I = set(I)
    return lf.ZetaFunction(tuple((L, e) for L, e in Z.factors if L.w not in I), label=Z.label)


@dataclass(frozen=True)
class BrauerSiegel:
    s: complex
    d_tildes: tuple
    ratios: tuple
    limit: complex
    gaps: tuple
    tail_bound: float
    negligible: tuple  # |log zeta_negligible(s)| / d_tilde, full form only

    @property
    def diagnostic(self) -> float:
        g = self.gaps[len(self.gaps) // 2 :]
        return max(g) if g else 0.0


def brauer_siegel_ratio(
    fam: FamilyRecord, data: AsymptoticData, s: complex, form: str = "essential"
) -> BrauerSiegel:
    """log zeta_k(s) / d_tilde_k for each member against log zeta_lim(s)."""
    if data.w_e is None:
        raise AllNegligible("every weight is negligible")
    sigma = complex(s).real
    if not (data.w_e / 2 < sigma < (data.w_e + 1) / 2):
        raise DomainError(f"Re s = {sigma} outside ({data.w_e / 2}, {(data.w_e + 1) / 2})")
    if form == "full" and float(2 * sigma).is_integer():
        raise DomainError("full-zeta form needs 2 Re s not an integer")
    if form not in ("essential", "full"):
        raise ValueError(f"unknown form {form!r}")
    limit, tail, _ = limit_log_zeta(limit_zeta(data), s)
    ratios, gaps, negl, dts = [], [], [], []
    for m in fam.members:
        if m.zeta is None:
            raise MissingSection("Brauer-Siegel ratios need full zeta records, not summaries")
        Ze = essential_zeta(m.zeta, data.I)
        if form == "essential":
            de = Ze.d_tilde
            r = lf.log_value(Ze, s) / de
        else:
            de = m.zeta.d_tilde
            r = lf.log_value(m.zeta, s) / de
            neg = lf.ZetaFunction(tuple((L, e) for L, e in m.zeta.factors if L.w in data.I))
            negl.append(abs(lf.log_value(neg, s)) / de if neg.factors else 0.0)
        dts.append(de)
        ratios.append(r if complex(s).imag else r.real)
        gaps.append(abs(r - limit))
    lim = limit if complex(s).imag else limit.real
    return BrauerSiegel(s, tuple(dts), tuple(ratios), lim, tuple(gaps), tail, tuple(negl))


# -- Euler-Kronecker limit ------------------------------------------------------------

def ek_limit(phi: Sequence[float], q: int) -> tuple[float, float]:
    """-sum phi_f f log q / (q^f - 1) with a tail bound.

    The tail uses f phi_f <= q^(f/2) - 1, which the basic inequality for
    curve families implies.
    """
    if any(x < 0 for x in phi):
        raise NegativePhi("phi must be non-negative")
    lq = math.log(q)
    value = -sum(x * f * lq / (q**f - 1) for f, x in enumerate(phi, start=1))
    F = len(phi)
    tail = lq * q ** (-(F + 1) / 2) / (1 - q ** -0.5)
    return value, tail


# -- central point ------------------------------------------------------------------------

@dataclass(frozen=True)
class CentralData:
    r: int
    c: float
    factors: tuple  # (weight, eps, multiplicity, leading coefficient)


def _central_factor(L: lf.LFunction, w_e: int) -> tuple[int, float]:
    """Multiplicity of u0 = q^(-w_e/2) as a root of L and the leading coefficient in s - w_e/2."""
    q = L.q
    lq = math.log(q)
    hp = lf.half_power(q, w_e)
    poly = list(L.coeffs)
    if hp is not None:
        # L = (1 - hp u)^m M(u); 1 - u/u0 ~ log q (s - s0)
        M, m = qpoly.divide_out(poly, [Fraction(1), -hp])
        value = float(qpoly.evaluate(M, 1 / hp))
        return m, value * lq**m
    # u0 irrational: u0 and -u0 are conjugate, so divide by 1 - q^w_e u^2
    M, m = qpoly.divide_out(poly, [Fraction(1), Fraction(0), -Fraction(q) ** w_e])
    at = qpoly.eval_at_surd(M, qpoly.QuadSurd(0, 1, Fraction(1, q**w_e)))
    value = float(at.a) + float(at.b) * math.sqrt(q**-w_e)
    # 1 - u^2/u0^2 = (1 - u/u0)(1 + u/u0) ~ 2 log q (s - s0)
    return m, value * (2 * lq) ** m


def central_data(Z: lf.ZetaFunction, w_e: int) -> CentralData:
    """Order r and leading Taylor coefficient c of zeta(s) at s = w_e/2."""
    r, c, facs = 0, 1.0, []
    for L, eps in Z.factors:
        m, lead = _central_factor(L, w_e)
        r += eps * m
        c *= lead**eps
        facs.append((L.w, eps, m, lead))
    return CentralData(r, c, tuple(facs))


@dataclass(frozen=True)
class CentralComparison:
    values: tuple  # log|c_k| / d_tilde_k
    limit: float
    margins: tuple
    satisfied: bool  # soft check only
    orientation: int  # +1: log|c|/d <= limit expected, -1: reversed


def central_comparison(fam: FamilyRecord, data: AsymptoticData) -> CentralComparison:
    """log|c_k| / d_tilde_k against log zeta_lim(w_e/2), as a soft check."""
    if data.w_e is None:
        raise AllNegligible("every weight is negligible")
    LZ = limit_zeta(data)
    s0 = data.w_e / 2
    try:
        limit = limit_log_zeta(LZ, s0)[0].real
    except DomainError:
        # not very exact: compare with the truncated series anyway
        limit = sum(x / f * data.q ** (-f * s0) for f, x in enumerate(LZ.lam, start=1))
    vals = []
    for m in fam.members:
        if m.zeta is None:
            raise MissingSection("central data needs full zeta records")
        Ze = essential_zeta(m.zeta, data.I)
        cd = central_data(Ze, data.w_e)
        vals.append(math.log(abs(cd.c)) / Ze.d_tilde)
    orient = data.signs.get(data.w_e, 1)
    margins = tuple(orient * (v - limit) for v in vals)
    return CentralComparison(tuple(vals), limit, margins, margins[-1] <= CONV_TOL, orient)


# -- base change ----------------------------------------------------------------------

@dataclass(frozen=True)
class TowerPlace:
    degree: int
    a_v: int
    bad: bool
    phi: tuple  # phi_{v,1}, phi_{v,2}, ...

    def trace(self, n: int, q: int) -> int:
        if self.bad:
            return self.a_v**n
        norm = q**self.degree
        t0, t1 = 2, self.a_v
        if n == 0:
            return t0
        for _ in range(n - 1):
            t0, t1 = t1, self.a_v * t1 - norm * t0
        return t1


@dataclass(frozen=True)
class TowerData:
    q: int
    nu: float
    places: tuple


def tower_from_record(rec: dict) -> TowerData:
    """Tower file: {"q": int, "nu": float, "phi": [{"place_deg", "a_v", "bad", "phi_vm": [..]}]}."""
    places = []
    for p in rec["phi"]:
        phi = tuple(lf.to_fraction(x, allow_float=True) for x in p["phi_vm"])
        if any(x < 0 for x in phi):
            raise NegativePhi(f"negative phi at a place of degree {p['place_deg']}")
        places.append(TowerPlace(int(p["place_deg"]), int(p["a_v"]), bool(p["bad"]), phi))
    if float(rec["nu"]) < 0:
        raise ZetaLabError("nu must be non-negative")
    return TowerData(int(rec["q"]), float(rec["nu"]), tuple(places))


@dataclass(frozen=True)
class BaseChange:
    lam: tuple
    inequality_lhs: float
    bound: float

    @property
    def slack(self) -> float:
        return self.bound - self.inequality_lhs


def base_change_lambda(tower: TowerData, F: int) -> BaseChange:
    """lambda_f = (1/(nu+4)) sum_{m k d_v = f} m d_v phi_{v,m} (alpha^(mk) + conj^(mk)).

    The inequality sum_f lambda_f q^(-f) <= 1/2 is rewritten place by
    place with the closed form of sum_k (alpha^(mk) + conj^(mk)) x^k,
    x = q^(-m d_v): (T x - 2x) / (1 - T x + x) at good places with
    T = alpha^m + conj^m, and a^m x / (1 - a^m x) at bad ones.
    """
    q, scale = tower.q, tower.nu + 4
    lam = []
    for f in range(1, F + 1):
        total = Fraction(0)
        for pl in tower.places:
            if f % pl.degree:
                continue
            n = f // pl.degree  # = m k
            for m in range(1, n + 1):
                if n % m == 0 and m <= len(pl.phi):
                    total += m * pl.degree * pl.phi[m - 1] * pl.trace(n, q)
        lam.append(float(total) / scale)
    lhs = 0.0
    for pl in tower.places:
        for m, ph in enumerate(pl.phi, start=1):
            if not ph:
                continue
            x = float(q) ** (-m * pl.degree)
            T = pl.trace(m, q)
            if pl.bad:
                g = T * x / (1 - T * x)
            else:
                g = (T * x - 2 * x) / (1 - T * x + x)
            lhs += m * pl.degree * float(ph) * g
    return BaseChange(tuple(lam), lhs, scale / 2)


# -- synthetic families ---------------------------------------------------------------

def power_lfunction(L: lf.LFunction, k: int, label: str | None = None) -> lf.LFunction:
    return lf.validate_lfunction(L.q, L.w, qpoly.power(list(L.coeffs), k), label=label)


def power_family(L: lf.LFunction, ks: Sequence[int], eps: int = 1) -> list[lf.ZetaFunction]:
    """Members L^k: every member has the same normalized coefficients."""
    return [lf.ZetaFunction.of((power_lfunction(L, k, f"L^{k}"), eps), label=f"L^{k}") for k in ks]


def trivial_family(q: int, ks: Sequence[int]) -> list[lf.ZetaFunction]:
    """Members (1 - q^(-s))^k of weight 0; lambda_f = -1 for every f."""
    L1 = lf.validate_lfunction(q, 0, [1, -1], label="1-u")
    return power_family(L1, ks)
