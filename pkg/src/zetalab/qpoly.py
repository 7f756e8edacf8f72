"""Dense univariate polynomials over Q as lists of ``Fraction``.

Coefficient order is constant term first throughout the package. The zero
polynomial is the empty list. These helpers exist so that every identity
checked on L-polynomials can be checked without floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

QPoly = list  # list[Fraction], constant term first


def qpoly(coeffs: Iterable) -> QPoly:
    return trim([Fraction(c) for c in coeffs])


def trim(p: QPoly) -> QPoly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence) -> int:
    return len(p) - 1 if p else -1


def add(a: QPoly, b: QPoly) -> QPoly:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def sub(a: QPoly, b: QPoly) -> QPoly:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def scale(a: QPoly, c) -> QPoly:
    return trim([c * x for x in a])


def mul(a: QPoly, b: QPoly) -> QPoly:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim(out)


def power(a: QPoly, k: int) -> QPoly:
    out: QPoly = [Fraction(1)]
    for _ in range(k):
        out = mul(out, a)
    return out


def divmod_(a: QPoly, b: QPoly) -> tuple[QPoly, QPoly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(a) - 1 < db:
        return [], trim(a)
    quot = [Fraction(0)] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] / lead
        quot[k - db] = c
        if c:
            for j in range(db + 1):
                a[k - db + j] -= c * b[j]
    return trim(quot), trim(a[:db])


def derivative(a: QPoly) -> QPoly:
    return trim([i * a[i] for i in range(1, len(a))])


def monic(a: QPoly) -> QPoly:
    if not a:
        return []
    lead = a[-1]
    return [x / lead for x in a]


# -- integer pseudo-remainder sequences ------------------------------------------
# Euclid over Q blows up the coefficient sizes; the primitive remainder
# sequence below works with integers and divides out contents as it goes.

def _primitive(a: Sequence) -> list[int]:
    """Positive rational multiple of a with coprime integer coefficients."""
    den = 1
    for c in a:
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in a]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    return [c // g for c in ints] if g > 1 else ints


def _prem_signed(a: list[int], b: list[int]) -> list[int]:
    """Remainder of a by b times a positive integer (signs as in Q[x] division)."""
    a = list(a)
    db, lead = len(b) - 1, b[-1]
    mult = abs(lead)
    sgn = 1 if lead > 0 else -1
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] * sgn
        a = [x * mult for x in a]
        if c:
            for j in range(db + 1):
                a[k - db + j] -= c * b[j]
        a.pop()
    return [int(x) for x in trim(a)]


def gcd(a: QPoly, b: QPoly) -> QPoly:
    a, b = trim(a), trim(b)
    if not b:
        return monic([Fraction(x) for x in a])
    x, y = _primitive(a), _primitive(b)
    while y:
        r = _prem_signed(x, y) if len(x) >= len(y) else x
        x, y = y, (_primitive(r) if r else [])
    return monic([Fraction(c) for c in x])


def squarefree_decomposition(a: QPoly) -> list[tuple[QPoly, int]]:
    """Yun's algorithm: ``a = c * prod(f_i ** i)`` with pairwise coprime f_i."""
    a = trim(a)
    if degree(a) <= 0:
        return []
    out = []
    da = derivative(a)
    g = gcd(a, da)
    b = divmod_(a, g)[0]
    c = divmod_(da, g)[0]
    dd = sub(c, derivative(b))
    i = 1
    while degree(b) > 0:
        g = gcd(b, dd)
        b = divmod_(b, g)[0]
        c = divmod_(dd, g)[0]
        if degree(g) > 0:
            out.append((g, i))
        dd = sub(c, derivative(b))
        i += 1
    return out


def evaluate(a: Sequence, x):
    acc = 0 * x
    for c in reversed(a):
        acc = acc * x + c
    return acc


def divide_out(a: QPoly, factor: QPoly) -> tuple[QPoly, int]:
    """Divide ``factor`` out of ``a`` as often as it goes exactly."""
    count = 0
    while degree(a) >= degree(factor):
        quot, rem = divmod_(a, factor)
        if rem:
            break
        a, count = quot, count + 1
    return a, count


# -- Sturm chains ------------------------------------------------------------

class QuadSurd:
    """The real number ``a + b*sqrt(d)`` with rational a, b and rational d >= 0."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=0):
        self.a, self.b, self.d = Fraction(a), Fraction(b), Fraction(d)

    def sign(self) -> int:
        a, b, d = self.a, self.b, self.d
        if b == 0 or d == 0:
            return (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        sa = (a > 0) - (a < 0)
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        diff = a * a - b * b * d
        if diff == 0:
            return 0
        return sa if diff > 0 else sb


def eval_at_surd(p: QPoly, x: QuadSurd) -> QuadSurd:
    """Exact value of p at ``x.a + x.b*sqrt(x.d)``, again of that form."""
    ra, rb = Fraction(0), Fraction(0)
    for c in reversed(p):
        ra, rb = ra * x.a + rb * x.b * x.d + c, ra * x.b + rb * x.a
    return QuadSurd(ra, rb, x.d)


def sturm_chain(p: QPoly) -> list[QPoly]:
    """Sturm sequence up to positive constant factors (enough for sign counts)."""
    p = trim(p)
    if not p:
        return []
    chain = [_primitive(p)]
    dp = derivative(p)
    if dp:
        chain.append(_primitive(dp))
    while len(chain) > 1 and len(chain[-1]) > 1:
        rem = _prem_signed(chain[-2], chain[-1])
        if not rem:
            break
        chain.append(_primitive([-c for c in rem]))
    return [[Fraction(c) for c in poly] for poly in chain]


def sign_variations(chain: list[QPoly], x) -> int:
    if isinstance(x, QuadSurd):
        signs = [eval_at_surd(c, x).sign() for c in chain]
    else:
        x = Fraction(x)
        signs = [(v > 0) - (v < 0) for v in (evaluate(c, x) for c in chain)]
    signs = [s for s in signs if s]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def count_real_roots(p: QPoly, lo, hi) -> int:
    """Distinct real roots of p in the half-open interval (lo, hi]."""
    chain = sturm_chain(p)
    return sign_variations(chain, lo) - sign_variations(chain, hi)
