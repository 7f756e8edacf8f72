"""Small finite fields F_{p^e} and polynomials over them.

An element of F_q (q = p^e) is encoded as the integer ``sum c_i p**i`` where
``c_0..c_{e-1}`` are its coordinates in the basis ``1, z, .., z^(e-1)`` of
``F_p[z]/(modulus)``. With that encoding F_p sits inside F_q as ``0..p-1``.
Multiplication goes through discrete log tables, so every operation also
has a vectorised numpy form, which is what the point counting relies on.

Extensions are always built directly over the prime field; the embedding of
F_q into F_{q^f} is computed by locating a root of F_q's modulus.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import NoSubfieldEmbedding, NotPrime, SizeGuardExceeded

FIELD_GUARD = 2**20
ENUM_GUARD = 2**22
MAX_IRREDUCIBLE_DEGREE = 12
MAX_FACTOR_DEGREE = 64


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def mobius(n: int) -> int:
    res, f = 1, 2
    while f * f <= n:
        if n % f == 0:
            n //= f
            if n % f == 0:
                return 0
            res = -res
        f += 1
    return -res if n > 1 else res


def necklace_count(q: int, d: int) -> int:
    """Number of monic irreducible polynomials of degree d over F_q."""
    return sum(mobius(m) * q ** (d // m) for m in range(1, d + 1) if d % m == 0) // d


# -- polynomials over F_p as int lists (used to pick the modulus) ------------

def _fp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    out = [0] * max(len(a) + len(b) - 1, 0)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _fp_mod(out, m, p)


def _fp_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _fp_trim(list(a))
    dm = len(m) - 1
    inv = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for j in range(dm + 1):
            a[shift + j] = (a[shift + j] - c * m[j]) % p
        _fp_trim(a)
    return a


def _fp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        a, b = b, _fp_mod(a, b, p)
    return a


def _fp_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    return _fp_trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _fp_powmod(a: list[int], k: int, m: list[int], p: int) -> list[int]:
    result, base = [1], _fp_mod(a, m, p)
    while k:
        if k & 1:
            result = _fp_mulmod(result, base, m, p)
        base = _fp_mulmod(base, base, m, p)
        k >>= 1
    return result


def _fp_irreducible(m: list[int], p: int) -> bool:
    """Distinct-degree test: no factor of degree <= deg/2."""
    n = len(m) - 1
    if n <= 1:
        return n == 1
    x = [0, 1]
    xp = x
    for _ in range(n // 2):
        xp = _fp_powmod(xp, p, m, p)
        g = _fp_gcd(m, _fp_sub(xp, x, p), p)
        if len(g) > 1:
            return False
    return True


def smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree e, constant term first."""
    # a zero constant term means t divides the candidate
    first = range(1, p) if e > 1 else range(p)
    for low in itertools.product(first, *[range(p)] * (e - 1)):
        m = list(low) + [1]
        if e > 1 and any(sum(c * x**i for i, c in enumerate(m)) % p == 0 for x in range(p)):
            continue  # has a linear factor
        if _fp_irreducible(m, p):
            return tuple(m)
    raise AssertionError("no irreducible polynomial found")  # unreachable


# -- the field ----------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    p: int
    e: int
    modulus: tuple[int, ...] = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.e

    def to_dict(self) -> dict:
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}

    # coordinates <-> integers

    @cached_property
    def _place(self) -> np.ndarray:
        return self.p ** np.arange(self.e, dtype=np.int64)

    def coords(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_coords(self, c: Sequence[int]) -> int:
        return sum((int(x) % self.p) * self.p**i for i, x in enumerate(c))

    def _mul_slow(self, a: int, b: int) -> int:
        m = list(self.modulus)
        return self.from_coords(_fp_mulmod(self.coords(a), self.coords(b), m, self.p) + [0] * self.e)

    # log tables

    @cached_property
    def generator(self) -> int:
        q = self.q
        if q == 2:
            return 1
        factors = prime_factors(q - 1)
        for g in range(2, q):
            if all(self._pow_slow(g, (q - 1) // r) != 1 for r in factors):
                return g
        raise AssertionError("no primitive element")  # unreachable

    def _pow_slow(self, a: int, k: int) -> int:
        result, base = 1, a
        while k:
            if k & 1:
                result = self._mul_slow(result, base)
            base = self._mul_slow(base, base)
            k >>= 1
        return result

    def _mul_matrix(self, c: int) -> np.ndarray:
        """Matrix of x -> c*x on coordinate vectors (acting on row vectors)."""
        rows = []
        zj = 1
        for _ in range(self.e):
            rows.append(self.coords(self._mul_slow(c, zj)))
            zj *= self.p  # times z, in the digit encoding
        return np.array(rows, dtype=np.int64)

    @cached_property
    def exp_table(self) -> np.ndarray:
        q, p = self.q, self.p
        n = q - 1
        block = np.zeros((1, self.e), dtype=np.int64)
        block[0, 0] = 1
        step = self.generator  # g ** len(block)
        while block.shape[0] < n:
            nxt = (block @ self._mul_matrix(step)) % p
            block = np.vstack([block, nxt])
            step = self._mul_slow(step, step)
        return (block[:n] @ self._place).astype(np.int64)

    @cached_property
    def log_table(self) -> np.ndarray:
        log = np.full(self.q, -1, dtype=np.int64)
        log[self.exp_table] = np.arange(self.q - 1, dtype=np.int64)
        return log

    # scalar arithmetic

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        p, out, scale = self.p, 0, 1
        for _ in range(self.e):
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += ((ra + rb) % p) * scale
            scale *= p
        return out

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        p, out, scale = self.p, 0, 1
        for _ in range(self.e):
            a, r = divmod(a, p)
            out += ((-r) % p) * scale
            scale *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        log = self.log_table
        return int(self.exp_table[(log[a] + log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return int(self.exp_table[(-self.log_table[a]) % (self.q - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            return 0 if k > 0 else 1
        return int(self.exp_table[(int(self.log_table[a]) * k) % (self.q - 1)])

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime field."""
        return n % self.p

    def chi(self, a: int) -> int:
        """Quadratic character (p odd)."""
        if a == 0:
            return 0
        return 1 if self.log_table[a] % 2 == 0 else -1

    # vector arithmetic

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    @cached_property
    def zech_table(self) -> np.ndarray:
        """zech[k] = log(1 + g^k), or -1 where 1 + g^k = 0."""
        s = self._vadd_digits(np.ones(self.q - 1, dtype=np.int64), self.exp_table)
        return self.log_table[s]

    def vadd(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return (a + b) % self.p
        # a + b = a (1 + b/a) through Zech logarithms
        n = self.q - 1
        la, lb = self.log_table[a], self.log_table[b]
        z = self.zech_table[(lb - la) % n]
        res = np.where(z < 0, 0, self.exp_table[(la + z) % n])
        return np.where(a == 0, b, np.where(b == 0, a, res))

    def _vadd_digits(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        p = self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for pl in self._place:
            out += (((a // pl) % p + (b // pl) % p) % p) * pl
        return out

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.e == 1:
            return (-a) % self.p
        out = np.zeros_like(a)
        for pl in self._place:
            out += ((-((a // pl) % self.p)) % self.p) * pl
        return out

    def vmul(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        log = self.log_table
        res = self.exp_table[(log[a] + log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, res)

    def vpow(self, a, k: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        res = self.exp_table[(self.log_table[a] * k) % (self.q - 1)]
        if k == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, res)

    def vchi(self, a) -> np.ndarray:
        """Quadratic character in {-1, 0, 1} (p odd)."""
        a = np.asarray(a, dtype=np.int64)
        parity = self.log_table[a] % 2
        return np.where(a == 0, 0, np.where(parity == 0, 1, -1))


@lru_cache(maxsize=None)
def make_field(p: int, e: int = 1, guard: int = FIELD_GUARD) -> FieldSpec:
    """F_{p^e} with the lexicographically smallest monic irreducible modulus."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1:
        raise ValueError("extension degree must be >= 1")
    if p**e > guard:
        raise SizeGuardExceeded(f"field of size {p}^{e} exceeds guard {guard}")
    return FieldSpec(p, e, smallest_irreducible(p, e))


# -- extensions and embeddings -----------------------------------------------

@dataclass(frozen=True)
class Extension:
    """F_{q^f} over F_q, with the embedding tabulated on all of F_q."""

    base: FieldSpec
    big: FieldSpec
    degree: int
    table: np.ndarray = field(repr=False, compare=False)  # base element -> big element

    def embed(self, x):
        return self.table[x] if isinstance(x, np.ndarray) else int(self.table[x])

    @cached_property
    def restrict_table(self) -> np.ndarray:
        back = np.full(self.big.q, -1, dtype=np.int64)
        back[self.table] = np.arange(self.base.q, dtype=np.int64)
        return back

    def restrict(self, y):
        """Inverse of embed on the image; -1 marks elements outside F_q."""
        return self.restrict_table[y] if isinstance(y, np.ndarray) else int(self.restrict_table[y])

    def frobenius(self, y):
        """y -> y**q in the big field."""
        return self.big.vpow(y, self.base.q) if isinstance(y, np.ndarray) else self.big.pow(y, self.base.q)


@lru_cache(maxsize=None)
def extension(F: FieldSpec, f: int, guard: int = ENUM_GUARD) -> Extension:
    if f < 1:
        raise ValueError("extension degree must be >= 1")
    big = make_field(F.p, F.e * f, guard=guard)
    if F.e == 1:
        table = np.arange(F.p, dtype=np.int64)
        return Extension(F, big, f, table)
    # a root of F.modulus (coefficients in F_p) in the big field
    xs = big.elements()
    acc = np.zeros_like(xs)
    for c in reversed(F.modulus):
        acc = big.vadd(big.vmul(acc, xs), c)
    roots = np.flatnonzero(acc == 0)
    if roots.size == 0:
        raise NoSubfieldEmbedding(f"F_{F.q} does not embed in F_{big.q}")
    r = int(roots[0])
    powers = [1]
    for _ in range(F.e - 1):
        powers.append(big.mul(powers[-1], r))
    table = np.zeros(F.q, dtype=np.int64)
    for i, pw in enumerate(powers):
        digit = (np.arange(F.q, dtype=np.int64) // F.p**i) % F.p
        table = big.vadd(table, big.vmul(digit, pw))
    return Extension(F, big, f, table)


def embed(x, ext: Extension):
    """Ring-homomorphic image of an F_q element (or array) in F_{q^f}."""
    return ext.embed(x)


# -- polynomials over F_q -----------------------------------------------------------

@dataclass(frozen=True)
class UniPoly:
    """Polynomial over F_q, coefficients constant term first, no trailing zeros."""

    F: FieldSpec = field(repr=False)
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @classmethod
    def from_ints(cls, F: FieldSpec, coeffs: Iterable[int]) -> "UniPoly":
        """Coefficients given as field-element encodings (plain ints mod p when e = 1)."""
        cs = [int(c) for c in coeffs]
        if F.e == 1:
            cs = [c % F.p for c in cs]
        elif any(c < 0 or c >= F.q for c in cs):
            raise ValueError("coefficient encodings must lie in [0, q)")
        return cls(F, tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UniPoly(self.F, tuple(self.F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)))

    def __neg__(self) -> "UniPoly":
        return UniPoly(self.F, tuple(self.F.neg(c) for c in self.coeffs))

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other) -> "UniPoly":
        F = self.F
        if isinstance(other, int):
            return UniPoly(F, tuple(F.mul(c, other) for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly(F, ())
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = F.add(out[i + j], F.mul(x, y))
        return UniPoly(F, tuple(out))

    def __pow__(self, k: int) -> "UniPoly":
        out = UniPoly(self.F, (1,))
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        F = self.F
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        a = list(self.coeffs)
        db = other.degree
        inv = F.inv(other.lead)
        if len(a) - 1 < db:
            return UniPoly(F, ()), self
        quot = [0] * (len(a) - db)
        for k in range(len(a) - 1, db - 1, -1):
            c = F.mul(a[k], inv)
            quot[k - db] = c
            if c:
                for j, bj in enumerate(other.coeffs):
                    a[k - db + j] = F.sub(a[k - db + j], F.mul(c, bj))
        return UniPoly(F, tuple(quot)), UniPoly(F, tuple(a[:db]))

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[1]

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self * self.F.inv(self.lead)

    def derivative(self) -> "UniPoly":
        F = self.F
        return UniPoly(F, tuple(F.mul(F.from_int(i), c) for i, c in enumerate(self.coeffs) if i > 0))

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = self.F.add(self.F.mul(acc, x), c)
        return acc

    def eval_in(self, ext: Extension, xs):
        """Evaluate at element(s) of an extension field (vectorised)."""
        big = ext.big
        xs = np.asarray(xs, dtype=np.int64)
        acc = np.zeros_like(xs)
        for c in reversed(self.coeffs):
            acc = big.vadd(big.vmul(acc, xs), ext.embed(c))
        return acc

    def to_list(self) -> list[list[int]]:
        """Serialization: coefficient array of coordinate vectors, constant term first."""
        return [self.F.coords(c) for c in self.coeffs]

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
                coef = str(c) if (c != 1 or i == 0) else ""
                terms.append(f"{coef}{'*' if coef and mono else ''}{mono}")
        return " + ".join(reversed(terms))


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def linear(F: FieldSpec, root: int) -> UniPoly:
    """The monic polynomial t - root."""
    return UniPoly(F, (F.neg(root), 1))


# -- places: monic irreducibles with a chosen root ----------------------------------

@dataclass(frozen=True)
class Place:
    """A monic irreducible pi over F_q and one of its roots in F_{q^deg}."""

    poly: UniPoly
    root: int
    ext: Extension = field(repr=False, compare=False)

    @property
    def degree(self) -> int:
        return self.poly.degree


def _orbit_representatives(ext: Extension, d: int) -> np.ndarray:
    """Elements with Frobenius orbit of size exactly d that are minimal in their orbit."""
    xs = ext.big.elements()
    cur = xs.copy()
    orbit_min = xs.copy()
    size = np.zeros_like(xs)
    for k in range(1, d + 1):
        cur = ext.frobenius(cur)
        orbit_min = np.minimum(orbit_min, cur)
        size = np.where((size == 0) & (cur == xs), k, size)
    return np.flatnonzero((size == d) & (orbit_min == xs))


@lru_cache(maxsize=None)
def places_of_degree(F: FieldSpec, d: int) -> tuple[Place, ...]:
    """All finite places of F_q(t) of degree d, sorted by their polynomial."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    if d > MAX_IRREDUCIBLE_DEGREE or F.q**d > ENUM_GUARD:
        raise SizeGuardExceeded(f"enumerating degree-{d} places over F_{F.q} exceeds the guard")
    ext = extension(F, d)
    big = ext.big
    reps = _orbit_representatives(ext, d)
    # min poly prod_{i<d} (x - r^{q^i}), vectorised over the orbits
    coeffs = np.zeros((d + 1, reps.size), dtype=np.int64)
    coeffs[0] = 1  # coefficient of x^0 of the running product, stored lowest first
    conj = reps.copy()
    for i in range(d):
        new = np.zeros_like(coeffs)
        neg = big.vneg(conj)
        for k in range(i + 2):
            term = big.vmul(coeffs[k], neg)
            if k > 0:
                term = big.vadd(term, coeffs[k - 1])
            new[k] = term
        coeffs = new
        conj = ext.frobenius(conj)
    small = ext.restrict(coeffs)
    if np.any(small < 0):
        raise AssertionError("minimal polynomial left the base field")  # unreachable
    out = [Place(UniPoly(F, tuple(int(c) for c in small[:, j])), int(reps[j]), ext) for j in range(reps.size)]
    out.sort(key=lambda pl: pl.poly.coeffs)
    return tuple(out)


def irreducibles_up_to(F: FieldSpec, D: int) -> dict[int, list[UniPoly]]:
    """Monic irreducibles over F_q grouped by degree 1..D."""
    if D > MAX_IRREDUCIBLE_DEGREE:
        raise SizeGuardExceeded(f"D={D} exceeds {MAX_IRREDUCIBLE_DEGREE}")
    out = {}
    for d in range(1, D + 1):
        polys = [pl.poly for pl in places_of_degree(F, d)]
        expected = necklace_count(F.q, d)
        if len(polys) != expected:
            raise AssertionError(f"found {len(polys)} irreducibles of degree {d}, expected {expected}")
        out[d] = polys
    return out


def factor_squarefree_part(f: UniPoly) -> list[tuple[UniPoly, int]]:
    """Factor f into monic irreducibles with multiplicity, by trial division.

    Only irreducibles up to half the degree of the remaining cofactor are
    tried; whatever is left after that is itself irreducible.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if f.degree > MAX_FACTOR_DEGREE:
        raise SizeGuardExceeded(f"degree {f.degree} exceeds {MAX_FACTOR_DEGREE}")
    rest = f.monic()
    out: list[tuple[UniPoly, int]] = []
    d = 1
    while 2 * d <= rest.degree:
        for pi in (pl.poly for pl in places_of_degree(f.F, d)):
            m = 0
            while rest.degree >= d:
                quot, rem = rest.divmod(pi)
                if not rem.is_zero():
                    break
                rest, m = quot, m + 1
            if m:
                out.append((pi, m))
        d += 1
    if rest.degree >= 1:
        out.append((rest, 1))
    out.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
    return out


def find_place(F: FieldSpec, pi: UniPoly) -> Place:
    """The Place record (with a root) for a given monic irreducible."""
    for pl in places_of_degree(F, pi.degree):
        if pl.poly.coeffs == pi.monic().coeffs:
            return pl
    raise ValueError(f"{pi} is not a monic irreducible over F_{F.q}")
