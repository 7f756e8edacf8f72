import pytest

from zetalab import elliptic_surface as es
from zetalab import lfun_core as lf
from zetalab.errors import CharTooSmall, ConstantCurve, ZetaLabError
from zetalab.finite_field import UniPoly, make_field

# (p, A, B, n_E)
SURFACES = [
    (5, [0, 1], [1, 1], 4),
    (7, [0, 1], [1, 1], 4),
    (5, [0, 1], [0, 0, 1], 5),
    (5, [0, 1], [1], 5),
]


def legendre(v, p):
    v %= p
    return 0 if v == 0 else (1 if pow(v, (p - 1) // 2, p) == 1 else -1)


def ev(c, t, p):
    return sum(x * t**i for i, x in enumerate(c)) % p


def test_pinned_surface():
    E = es.elliptic_surface(make_field(5), [0, 1], [1])
    reds = {r.label(): (r.kind, r.a_v) for r in es.bad_places(E)}
    assert reds == {
        "t + 2": (es.MULTIPLICATIVE, 1),
        "t^2 + 3*t + 4": (es.MULTIPLICATIVE, 1),
        "inf": (es.ADDITIVE, 0),
    }
    good = es.reduce_at(E, UniPoly.from_ints(E.base, [0, 1]))
    assert good.kind == es.GOOD and good.a_v == 0
    data = es.ell_lfunction(E)
    assert data.n_E == 5 and data.d == 1
    assert [int(c) for c in data.L.coeffs] == [1, -5]
    assert data.omega == -1
    assert list(data.lambdas) == [-5, -25, -125, -625, -3125]
    rec = data.to_record()
    assert rec["n_E"] == 5 and rec["degree"] == 1 and len(rec["places"]) == 3


@pytest.mark.parametrize("p,A,B,n_E", SURFACES)
def test_degree_one_traces_brute_force(p, A, B, n_E):
    E = es.elliptic_surface(make_field(p), A, B)
    for r in es.place_reductions(E, 1)[1]:
        if r.place == es.INFINITY or r.kind != es.GOOD:
            continue
        t0 = (-r.place.coeffs[0]) % p
        a, b = ev(A, t0, p), ev(B, t0, p)
        assert r.a_v == -sum(legendre(x**3 + a * x + b, p) for x in range(p))


@pytest.mark.parametrize("p,A,B,n_E", SURFACES)
def test_degree_identity_and_two_routes(p, A, B, n_E):
    E = es.elliptic_surface(make_field(p), A, B)
    data = es.ell_lfunction(E)
    assert data.n_E == n_E == es.conductor_degree(E)
    assert data.L.d == n_E - 4
    F = len(data.lambdas)
    assert es.fibre_lambdas(E, F) == list(data.lambdas)
    assert [int(x) for x in lf.lambdas_from_coeffs(data.L.coeffs, F)] == list(data.lambdas)


def test_twist_by_t_is_isomorphic():
    # (t^4 A, t^6 B) is the same curve over F_q(t)
    F = make_field(5)
    E1 = es.elliptic_surface(F, [0, 1], [1, 1])
    E2 = es.elliptic_surface(F, [0, 0, 0, 0, 0, 1], [0] * 6 + [1, 1])
    assert es.ell_lfunction(E1).L.coeffs == es.ell_lfunction(E2).L.coeffs


def test_hasse_bound_at_good_places():
    E = es.elliptic_surface(make_field(5), [0, 1], [0, 0, 1])
    for d, reds in es.place_reductions(E, 2).items():
        for r in reds:
            if r.kind == es.GOOD:
                assert r.a_v**2 <= 4 * r.norm
            else:
                assert r.a_v in ((0,) if r.kind == es.ADDITIVE else (1, -1))


def test_trace_power_recurrence():
    r = es.PlaceReduction(None, 1, es.GOOD, 2, 5)
    # alpha + conj = 2, alpha conj = 5: alpha^2 + conj^2 = 4 - 10
    assert [r.trace_power(m) for m in range(3)] == [2, 2, -6]


def test_local_model_and_valuation():
    F = make_field(5)
    t = UniPoly.from_ints(F, [0, 1])
    assert es.valuation(t**3 * UniPoly.from_ints(F, [1, 1]), t) == 3
    # t^4 A, t^6 B is not minimal at t
    E = es.elliptic_surface(F, [0, 0, 0, 0, 0, 1], [0] * 6 + [1, 1])
    pi, A, B = es.local_model(E, t)
    assert A.coeffs == (0, 1) and B.coeffs == (1, 1)


def test_surface_errors():
    with pytest.raises(CharTooSmall):
        es.elliptic_surface(make_field(3), [0, 1], [1])
    with pytest.raises(ConstantCurve):
        es.elliptic_surface(make_field(5), [0], [1, 1])
    with pytest.raises(ConstantCurve):
        es.elliptic_surface(make_field(5), [1], [1])
    # A = 2 t^2, B = 2 t^3: 4 A^3 + 27 B^2 = 0 over F_5
    with pytest.raises(ZetaLabError):
        es.elliptic_surface(make_field(5), [0, 0, 2], [0, 0, 0, 2])


def test_conductor_six_surface():
    # place route only: the fibre route would enumerate F_{5^6} x F_{5^6}
    E = es.elliptic_surface(make_field(5), [1, 1], [0, 0, 1])
    data = es.ell_lfunction(E)
    assert data.n_E == 6 and data.d == 2
    assert all(c.denominator == 1 for c in data.L.coeffs)
