import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from zetalab import asymptotics as asy
from zetalab import curve_zeta as cz
from zetalab import lfun_core as lf
from zetalab.errors import DomainError, HypothesisNotMet, MissingSection, NegativePhi, SOutOfRange, TooFewMembers
from zetalab.finite_field import make_field

from _corpus import CURVE_FAMILY, random_coeffs

BASE = lf.validate_lfunction(4, 1, [1, -1, 4], label="base")


@pytest.fixture(scope="module")
def curve_family():
    F3 = make_field(3)
    zs = [cz.curve_zeta(cz.curve_model(F3, CURVE_FAMILY[g]), label=f"g{g}").zeta() for g in sorted(CURVE_FAMILY)]
    fam = asy.family_from_zetas(zs, F=16)
    return fam, asy.estimate_limits(fam)


@pytest.fixture(scope="module")
def power_family():
    fam = asy.family_from_zetas(asy.power_family(BASE, [1, 2, 4, 8]), F=12)
    return fam, asy.estimate_limits(fam)


def test_trivial_family():
    fam = asy.family_from_zetas(asy.trivial_family(3, [1, 2, 4, 8, 16]))
    data = asy.estimate_limits(fam)
    assert data.classification == (asy.EXACT, asy.GOOD, asy.NOT_VERY_EXACT)
    assert all(x == -1.0 for x in data.lam)
    assert data.delta == {0: 1.0} and data.w_e == 0 and not data.I
    assert fam.F == asy.default_depth([1, 16]) == 32


def test_power_family_coefficients(power_family):
    fam, data = power_family
    lam = lf.lambdas_from_coeffs(BASE.coeffs, fam.F)
    assert all(abs(x - float(y) / 2) < 1e-15 for x, y in zip(data.lam, lam))
    assert all(d == 0 for d in data.lam_diag)
    assert data.exact and not data.bad


def test_basic_inequality_matches_drinfeld(power_family):
    # for copies of one L: slack(b) = drinfeld(L, b) / (2 d (b + 1))
    fam, data = power_family
    for b in range(1, fam.F + 1):
        r = asy.basic_inequality_L(data, b)
        expected = float(asy.drinfeld_slack(BASE, b)) / (2 * BASE.d * (b + 1))
        assert abs(r.slack - expected) < 1e-12
    with pytest.raises(HypothesisNotMet):
        asy.basic_inequality_L(data, fam.F + 1)


def test_curve_family_classification(curve_family):
    fam, data = curve_family
    assert data.I == frozenset({0, 2}) and data.w_e == 1
    assert data.classification[0] == asy.NOT_EXACT
    assert data.very.verdict == asy.INCONCLUSIVE
    split = asy.essential_split(fam, data)
    assert split.ok


def test_curve_family_member_inequalities(curve_family):
    fam, data = curve_family
    for m in fam.members:
        for s in (0.55, 0.7, 0.85, 0.95):
            r = asy.basic_inequality_zeta_member(m, 3, data.I, s)
            assert r.holds, (m.label, s)
    with pytest.raises(SOutOfRange):
        asy.basic_inequality_zeta(data, 1.2)


@given(st.integers(0, 10**6))
def test_drinfeld_slack_nonnegative(seed):
    q, w, poly = random_coeffs(random.Random(seed))
    L = lf.validate_lfunction(q, w, poly)
    for b in (1, 2, 5, 11):
        slack = asy.drinfeld_slack(L, b)
        if lf.half_power(q, w) is not None:
            assert isinstance(slack, Fraction)
        assert slack >= -1e-9


def test_summary_records_match_zeta_records(curve_family):
    fam, data = curve_family
    recs = [
        {
            "q": 3,
            "d_tilde": m.d_tilde,
            "degrees": [m.degrees.get(w, 0) for w in range(3)],
            "signs": [m.signs.get(w, 1) for w in range(3)],
            "lambdas": [str(x) for x in m.lambdas],
        }
        for m in fam.members
    ]
    fam2 = asy.family_from_records(json.loads(json.dumps(recs)))
    data2 = asy.estimate_limits(fam2)
    assert data2.lam == data.lam and data2.I == data.I
    with pytest.raises(MissingSection):
        asy.brauer_siegel_ratio(fam2, data2, 0.75)


def test_too_few_members():
    fam = asy.family_from_zetas(asy.trivial_family(3, [1, 2, 4]))
    with pytest.raises(TooFewMembers):
        asy.estimate_limits(fam)


def test_very_exact_check():
    decaying = [2.0 * 0.5**f for f in range(1, 20)]
    assert asy.very_exact_check(decaying, 4, 1).verdict == asy.VERY_EXACT
    assert asy.very_exact_check([1.0] * 20, 4, 0).verdict == asy.NOT_VERY_EXACT
    assert asy.very_exact_check([0.0] * 20, 4, 1).verdict == asy.VERY_EXACT


def test_limit_log_zeta(power_family):
    fam, data = power_family
    LZ = asy.limit_zeta(data)
    s = 0.9
    value, tail, rigorous = asy.limit_log_zeta(LZ, s)
    series = sum(x / f * 4 ** (-f * s) for f, x in enumerate(data.lam_e, start=1))
    assert rigorous and abs(value - series) < 1e-15
    # the full log L(u) / 2 differs from the truncation by at most the tail
    exact = lf.log_value(lf.ZetaFunction.single(BASE), s).real / 2
    assert abs(value.real - exact) <= tail
    with pytest.raises(DomainError):
        asy.limit_log_zeta(LZ, 0.4)


def test_brauer_siegel_power_family(power_family):
    fam, data = power_family
    bs = asy.brauer_siegel_ratio(fam, data, 0.8)
    assert max(bs.ratios) - min(bs.ratios) < 1e-14
    assert max(bs.gaps) <= bs.tail_bound + 1e-14
    with pytest.raises(DomainError):
        asy.brauer_siegel_ratio(fam, data, 1.2)


def test_ek_limit():
    value, tail = asy.ek_limit([1], 4)
    assert abs(value + math.log(4) / 3) < 1e-15 and tail > 0
    with pytest.raises(NegativePhi):
        asy.ek_limit([-1], 4)


def test_central_data():
    L = lf.validate_lfunction(2, 1, [1, 0, 2])
    cd = asy.central_data(lf.ZetaFunction.single(L), 1)
    assert cd.r == 0 and abs(cd.c - 2) < 1e-15
    L = lf.validate_lfunction(4, 1, [1, -2])
    cd = asy.central_data(lf.ZetaFunction.single(L), 1)
    assert cd.r == 1 and abs(cd.c - math.log(4)) < 1e-15
    # irrational centre: 1 - 2u^2 vanishes at u = 2^(-1/2)
    L = lf.validate_lfunction(2, 1, [1, 0, -2])
    cd = asy.central_data(lf.ZetaFunction.single(L), 1)
    assert cd.r == 1 and abs(cd.c - 2 * math.log(2)) < 1e-14


def test_central_comparison_runs(power_family):
    fam, data = power_family
    cc = asy.central_comparison(fam, data)
    assert len(cc.values) == len(fam)


def test_base_change_against_fixture(fixtures_dir):
    rec = json.loads((fixtures_dir / "tower.json").read_text())
    bc = asy.base_change_lambda(asy.tower_from_record(rec), len(rec["expected_lambda"]))
    assert all(abs(x - y) < 1e-12 for x, y in zip(bc.lam, rec["expected_lambda"]))
    assert bc.slack > 0
    # the closed-form left side against the truncated series sum_f lambda_f q^-f
    series = asy.base_change_lambda(asy.tower_from_record(rec), 60).lam
    approx = sum(x * rec["q"] ** -(f + 1) for f, x in enumerate(series)) * (rec["nu"] + 4)
    assert abs(approx - bc.inequality_lhs) < 1e-9


def test_tower_validation():
    with pytest.raises(NegativePhi):
        asy.tower_from_record({"q": 5, "nu": 1, "phi": [{"place_deg": 1, "a_v": 0, "bad": False, "phi_vm": [-1]}]})
