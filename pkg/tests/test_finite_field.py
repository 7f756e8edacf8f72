import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_mul, gf_rem

from zetalab import finite_field as ff
from zetalab.errors import NotPrime, SizeGuardExceeded

FIELDS = [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (5, 2), (2, 3), (7, 1)]


def gf_oracle_mul(F, a, b):
    """Product via sympy's dense GF(p) arithmetic modulo F.modulus."""
    hi = lambda c: list(reversed(c))  # noqa: E731
    prod = gf_rem(gf_mul(hi(F.coords(a)), hi(F.coords(b)), F.p, ZZ), hi(list(F.modulus)), F.p, ZZ)
    return F.from_coords(list(reversed([int(c) for c in prod])))


@pytest.mark.parametrize("p,e", FIELDS)
def test_modulus_is_irreducible(p, e):
    F = ff.make_field(p, e)
    assert gf_irreducible_p(list(reversed(F.modulus)), p, ZZ)


def test_modulus_choices():
    assert ff.make_field(5, 2).modulus == (1, 1, 1)
    assert ff.make_field(3, 2).modulus == (1, 0, 1)
    assert ff.make_field(2, 2).modulus == (1, 1, 1)
    assert ff.make_field(7, 1).modulus == (0, 1)


@pytest.mark.parametrize("p,e", FIELDS)
def test_multiplication_matches_oracle(p, e):
    F = ff.make_field(p, e)
    q = F.q
    for a in range(q):
        for b in range(q):
            assert F.mul(a, b) == gf_oracle_mul(F, a, b)


@given(st.sampled_from(FIELDS), st.data())
def test_field_axioms(pe, data):
    F = ff.make_field(*pe)
    el = st.integers(0, F.q - 1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.pow(a, F.q - 1) == 1


@pytest.mark.parametrize("p,e", FIELDS)
def test_vector_ops_match_scalar(p, e):
    F = ff.make_field(p, e)
    xs = F.elements()
    ys = (xs * 7 + 3) % F.q
    assert F.vadd(xs, ys).tolist() == [F.add(int(a), int(b)) for a, b in zip(xs, ys)]
    assert F.vmul(xs, ys).tolist() == [F.mul(int(a), int(b)) for a, b in zip(xs, ys)]
    assert F.vchi(xs).tolist() == [F.chi(int(a)) for a in xs]


@pytest.mark.parametrize("p", [3, 5, 7])
def test_quadratic_character_euler_criterion(p):
    F = ff.make_field(p)
    for a in range(p):
        expected = 0 if a == 0 else (1 if pow(a, (p - 1) // 2, p) == 1 else -1)
        assert F.chi(a) == expected


@pytest.mark.parametrize("p,e,f", [(3, 1, 2), (2, 2, 3), (5, 1, 2), (3, 2, 2)])
def test_embedding_is_a_ring_homomorphism(p, e, f):
    F = ff.make_field(p, e)
    ext = ff.extension(F, f)
    big = ext.big
    for a in range(F.q):
        for b in range(F.q):
            assert ext.embed(F.add(a, b)) == big.add(ext.embed(a), ext.embed(b))
            assert ext.embed(F.mul(a, b)) == big.mul(ext.embed(a), ext.embed(b))
        # the image is fixed by Frobenius and restricts back
        assert ext.frobenius(ext.embed(a)) == ext.embed(a)
        assert ext.restrict(ext.embed(a)) == a


def test_place_counts_are_necklace_numbers():
    F3 = ff.make_field(3)
    counts = [len(ff.places_of_degree(F3, d)) for d in range(1, 9)]
    assert counts == [3, 3, 8, 18, 48, 116, 312, 810]
    assert counts == [ff.necklace_count(3, d) for d in range(1, 9)]
    F4 = ff.make_field(2, 2)
    assert [len(ff.places_of_degree(F4, d)) for d in range(1, 5)] == [ff.necklace_count(4, d) for d in range(1, 5)]


@pytest.mark.parametrize("p,d", [(2, 5), (3, 4), (5, 3)])
def test_places_are_irreducible_and_distinct(p, d):
    F = ff.make_field(p)
    polys = [pl.poly.coeffs for pl in ff.places_of_degree(F, d)]
    assert len(set(polys)) == len(polys)
    for c in polys:
        assert gf_irreducible_p(list(reversed(c)), p, ZZ)


def test_places_roots():
    F = ff.make_field(5)
    for pl in ff.places_of_degree(F, 2):
        assert int(pl.poly.eval_in(pl.ext, np.array([pl.root]))[0]) == 0


def test_factorization_example():
    F5 = ff.make_field(5)
    f = ff.UniPoly.from_ints(F5, [3, 0, 0, 1])  # t^3 + 3
    fac = ff.factor_squarefree_part(f)
    assert [(g.coeffs, m) for g, m in fac] == [((2, 1), 1), ((4, 3, 1), 1)]
    assert str(fac[1][0]) == "t^2 + 3*t + 4"


@given(st.lists(st.integers(0, 4), min_size=2, max_size=7))
def test_factorization_matches_sympy(coeffs):
    F5 = ff.make_field(5)
    f = ff.UniPoly.from_ints(F5, coeffs)
    if f.degree < 1:
        return
    fac = ff.factor_squarefree_part(f)
    t = sympy.Symbol("t")
    P = sympy.Poly(list(reversed(f.monic().coeffs)), t, modulus=5)
    expected = sorted((tuple(int(c) % 5 for c in reversed(g.all_coeffs())), m) for g, m in P.factor_list()[1])
    assert sorted((g.coeffs, m) for g, m in fac) == expected


def test_unipoly_arithmetic():
    F = ff.make_field(3, 2)
    a = ff.UniPoly.from_ints(F, [1, 2, 3])
    b = ff.UniPoly.from_ints(F, [4, 0, 1])
    q, r = (a * b + a).divmod(b)
    assert r.is_zero() or r.degree < b.degree
    assert q * b + r == a * b + a
    assert ff.poly_gcd(a * b, b * b).coeffs == b.monic().coeffs


def test_errors():
    with pytest.raises(NotPrime):
        ff.make_field(6)
    with pytest.raises(SizeGuardExceeded):
        ff.make_field(2, 30)
    with pytest.raises(SizeGuardExceeded):
        ff.places_of_degree(ff.make_field(3), 20)
