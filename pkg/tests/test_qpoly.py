from fractions import Fraction

import numpy as np
import sympy
from hypothesis import given
from hypothesis import strategies as st

from zetalab import qpoly

x = sympy.Symbol("x")
small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
polys = st.lists(small, min_size=1, max_size=7).map(qpoly.trim)


def to_sympy(p):
    return sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in p])) or [0], x)


def from_sympy(P):
    return qpoly.trim([Fraction(str(c)) for c in reversed(P.all_coeffs())])


@given(polys, polys)
def test_mul_and_divmod_match_sympy(a, b):
    assert qpoly.mul(a, b) == from_sympy(to_sympy(a) * to_sympy(b))
    if b:
        q, r = qpoly.divmod_(a, b)
        Q, R = sympy.div(to_sympy(a), to_sympy(b))
        assert q == from_sympy(Q) and r == from_sympy(R)


@given(polys, polys, polys)
def test_gcd_matches_sympy(a, b, c):
    a, b = qpoly.mul(a, c), qpoly.mul(b, c)
    if not a and not b:
        return
    g = qpoly.gcd(a, b)
    G = sympy.gcd(to_sympy(a), to_sympy(b))
    assert g == qpoly.monic(from_sympy(G))


@given(polys, st.integers(1, 3), polys)
def test_squarefree_decomposition_reassembles(a, k, b):
    p = qpoly.mul(qpoly.power(a, k), b)
    if qpoly.degree(p) <= 0:
        return
    parts = qpoly.squarefree_decomposition(p)
    prod = [Fraction(1)]
    for f, m in parts:
        prod = qpoly.mul(prod, qpoly.power(f, m))
    # equal up to a constant factor
    assert qpoly.monic(prod) == qpoly.monic(p)
    sym = sympy.sqf_list(to_sympy(p))[1]
    assert sorted(m for _, m in parts) == sorted(m for _, m in sym)


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=5, unique=True))
def test_sturm_counts_real_roots(roots):
    p = [Fraction(1)]
    for r in roots:
        p = qpoly.mul(p, [Fraction(-r), Fraction(1)])
    assert qpoly.count_real_roots(p, Fraction(-7), Fraction(7)) == len(roots)
    assert qpoly.count_real_roots(p, Fraction(0), Fraction(7)) == sum(1 for r in roots if r > 0)


@given(small, small, st.fractions(min_value=0, max_value=10, max_denominator=5))
def test_quadsurd_sign_matches_float(a, b, d):
    v = float(a) + float(b) * float(d) ** 0.5
    s = qpoly.QuadSurd(a, b, d).sign()
    if abs(v) > 1e-9:
        assert s == np.sign(v)


def test_eval_at_surd_is_exact():
    # p(sqrt 2) for p = x^2 - 2 is exactly zero
    val = qpoly.eval_at_surd([Fraction(-2), Fraction(0), Fraction(1)], qpoly.QuadSurd(0, 1, 2))
    assert val.sign() == 0
