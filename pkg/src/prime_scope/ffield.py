"""Finite fields F_{p^f} and polynomial factorization over F_p.

Prime-field polynomials are int tuples, lowest degree first, coefficients in
[0, p), trailing zeros stripped.  Extension-field elements are coefficient
tuples of length f modulo a canonical irreducible polynomial.

Factorization is squarefree split + distinct-degree + equal-degree
(Cantor-Zassenhaus), with the equal-degree randomness drawn from a PRNG
seeded deterministically from the input polynomial and p, so results never
depend on run order.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NotPIntegral, ZeroElement
from .qpoly import QPoly

FPoly = tuple[int, ...]


# ---------------------------------------------------------------------------
# polynomial arithmetic over F_p
# ---------------------------------------------------------------------------

def ftrim(c: Sequence[int]) -> FPoly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def fadd(a: FPoly, b: FPoly, p: int) -> FPoly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] = (out[i] + v) % p
    return ftrim(out)


def fneg(a: FPoly, p: int) -> FPoly:
    return tuple((-v) % p for v in a)


def fsub(a: FPoly, b: FPoly, p: int) -> FPoly:
    return fadd(a, fneg(b, p), p)


def fmul(a: FPoly, b: FPoly, p: int) -> FPoly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, va in enumerate(a):
        if va:
            for j, vb in enumerate(b):
                out[i + j] = (out[i + j] + va * vb) % p
    return ftrim(out)


def fscale(a: FPoly, c: int, p: int) -> FPoly:
    c %= p
    return ftrim([v * c % p for v in a])


def fdivmod(a: FPoly, b: FPoly, p: int) -> tuple[FPoly, FPoly]:
    if not b:
        raise ZeroDivisionError
    inv = pow(b[-1], p - 2, p)
    rem = list(a)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(rem) >= len(b):
        if rem[-1] == 0:
            rem.pop()
            continue
        k = len(rem) - len(b)
        f = rem[-1] * inv % p
        q[k] = f
        for i, v in enumerate(b):
            rem[k + i] = (rem[k + i] - f * v) % p
        rem.pop()
    return ftrim(q), ftrim(rem)


def fmod(a: FPoly, b: FPoly, p: int) -> FPoly:
    return fdivmod(a, b, p)[1]


def fmonic(a: FPoly, p: int) -> FPoly:
    if not a:
        return a
    return fscale(a, pow(a[-1], p - 2, p), p)


def fgcd(a: FPoly, b: FPoly, p: int) -> FPoly:
    while b:
        a, b = b, fmod(a, b, p)
    return fmonic(a, p)


def fpowmod(a: FPoly, e: int, m: FPoly, p: int) -> FPoly:
    result: FPoly = (1,)
    a = fmod(a, m, p)
    while e:
        if e & 1:
            result = fmod(fmul(result, a, p), m, p)
        a = fmod(fmul(a, a, p), m, p)
        e >>= 1
    return result


def feval(a: FPoly, x: int, p: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def fderiv(a: FPoly, p: int) -> FPoly:
    return ftrim([i * c % p for i, c in enumerate(a)][1:])


def is_irreducible(a: FPoly, p: int) -> bool:
    """Monic a of degree >= 1: irreducible iff X^{p^d} = X mod a and
    gcd(X^{p^{d/l}} - X, a) = 1 for every prime l | d."""
    d = len(a) - 1
    if d < 1:
        return False
    x: FPoly = (0, 1)
    if fpowmod(x, p ** d, a, p) != fmod(x, a, p):
        return False
    for l in _prime_divisors(d):
        h = fsub(fpowmod(x, p ** (d // l), a, p), fmod(x, a, p), p)
        if fgcd(h, a, p) != (1,):
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def irreducible_poly(p: int, d: int) -> QPoly:
    """The canonical monic irreducible of degree d over F_p: candidates are
    X^d + c_{d-1}X^{d-1} + ... + c_0 scanned with (c_{d-1},...,c_0) as an
    ascending base-p counter, first irreducible wins."""
    if d < 1:
        raise ValueError("degree must be positive")
    for k in range(p ** d):
        tail = []
        kk = k
        for _ in range(d):
            tail.append(kk % p)
            kk //= p
        cand = ftrim(tail + [1])
        if is_irreducible(cand, p):
            return QPoly([Fraction(c) for c in cand])
    raise AssertionError("unreachable: irreducibles of every degree exist")


# ---------------------------------------------------------------------------
# factorization over F_p
# ---------------------------------------------------------------------------

def reduce_qpoly_mod_p(g: QPoly, p: int) -> FPoly:
    """Reduce a rational polynomial mod p; denominators divisible by p are
    rejected."""
    out = []
    for c in g.coeffs:
        if c.denominator % p == 0:
            raise NotPIntegral(f"coefficient {c} is not {p}-integral")
        out.append(c.numerator * pow(c.denominator, p - 2, p) % p)
    return ftrim(out)


def _edf_seed(a: FPoly, p: int) -> int:
    seed = p
    for c in a:
        seed = (seed * 1000003 + c + 1) & 0xFFFFFFFFFFFF
    return seed


def _equal_degree_split(a: FPoly, d: int, p: int, rng: random.Random) -> list[FPoly]:
    """Cantor-Zassenhaus: a is monic, squarefree, all factors of degree d."""
    n = len(a) - 1
    if n == d:
        return [a]
    while True:
        h = ftrim([rng.randrange(p) for _ in range(n)] + [1])
        if p == 2:
            # trace map over F_{2^d}
            t: FPoly = ()
            acc = fmod(h, a, p)
            for _ in range(d):
                t = fadd(t, acc, p)
                acc = fmod(fmul(acc, acc, p), a, p)
            g = fgcd(t, a, p)
        else:
            e = (p ** d - 1) // 2
            g = fgcd(fsub(fpowmod(h, e, a, p), (1,), p), a, p)
        if g not in ((1,), ()) and len(g) - 1 < n:
            other = fdivmod(a, g, p)[0]
            return _equal_degree_split(g, d, p, rng) + _equal_degree_split(other, d, p, rng)


def factor_fpoly(a: FPoly, p: int) -> list[tuple[FPoly, int]]:
    """Full factorization of a nonzero polynomial over F_p into monic
    irreducibles with multiplicities, canonically sorted."""
    if not a:
        raise ValueError("cannot factor the zero polynomial")
    rng = random.Random(_edf_seed(a, p))
    a = fmonic(a, p)
    factors: dict[FPoly, int] = {}

    def add(f: FPoly, mult: int):
        factors[f] = factors.get(f, 0) + mult

    def squarefree_split(g: FPoly, outer_mult: int):
        if len(g) - 1 < 1:
            return
        dg = fderiv(g, p)
        if not dg:
            # g = h(X^p) = h(X)^p over F_p: deflate exponents and recurse
            h = ftrim([g[i] for i in range(0, len(g), p)])
            squarefree_split(h, outer_mult * p)
            return
        s = fgcd(g, dg, p)
        w = fdivmod(g, s, p)[0]  # each factor of multiplicity not divisible by p, once
        i = 1
        while w != (1,):
            y = fgcd(w, s, p)
            band = fdivmod(w, y, p)[0]  # factors of exact multiplicity i
            if len(band) - 1 >= 1:
                for f in _distinct_degree(band, p, rng):
                    add(f, i * outer_mult)
            s = fdivmod(s, y, p)[0]
            w = y
            i += 1
        # s now holds exactly the factors with multiplicity divisible by p
        if len(s) - 1 >= 1:
            squarefree_split(s, outer_mult)

    def _distinct_degree(g: FPoly, p: int, rng) -> list[FPoly]:
        out = []
        x: FPoly = (0, 1)
        frob = x
        d = 1
        while len(g) - 1 >= 2 * d:
            frob = fpowmod(frob, p, g, p)
            h = fgcd(fsub(frob, x, p), g, p)
            if h != (1,):
                out.extend(_equal_degree_split(h, d, p, rng))
                g = fdivmod(g, h, p)[0]
                frob = fmod(frob, g, p)
            d += 1
        if len(g) - 1 >= 1:
            out.append(g)
        return out

    squarefree_split(a, 1)
    items = [(f, m) for f, m in factors.items()]
    items.sort(key=lambda fm: (len(fm[0]), fm[0]))
    return items


def poly_factor_mod_p(g: QPoly, p: int) -> list[tuple[QPoly, int]]:
    """Factor g mod p into monic irreducibles; coefficients lifted to [0,p).

    Raises NotPIntegral when a denominator is divisible by p.
    """
    a = reduce_qpoly_mod_p(g, p)
    if not a:
        raise ValueError("polynomial vanishes mod p")
    return [
        (QPoly([Fraction(c) for c in f]), m)
        for f, m in factor_fpoly(a, p)
    ]


# ---------------------------------------------------------------------------
# the canonical field F_{p^f}
# ---------------------------------------------------------------------------

class FF:
    """F_{p^f} as F_p[Y] modulo the canonical irreducible of degree f."""

    _cache: dict[tuple[int, int], "FF"] = {}

    def __new__(cls, p: int, f: int):
        key = (p, f)
        if key not in cls._cache:
            obj = super().__new__(cls)
            obj.p, obj.f = p, f
            obj.modulus = ftrim([int(c) for c in irreducible_poly(p, f).coeffs])
            cls._cache[key] = obj
        return cls._cache[key]

    @property
    def order(self) -> int:
        return self.p ** self.f

    def element(self, coeffs: Iterable[int]) -> "FFElem":
        cs = [c % self.p for c in coeffs]
        if len(cs) > self.f:
            cs = list(fmod(ftrim(cs), self.modulus, self.p))
        cs = cs + [0] * (self.f - len(cs))
        return FFElem(self, tuple(cs[: self.f]))

    def zero(self) -> "FFElem":
        return self.element([])

    def one(self) -> "FFElem":
        return self.element([1])

    def gen(self) -> "FFElem":
        return self.element([0, 1])

    def elements(self):
        """All elements, in base-p counter order of coefficient vectors."""
        for k in range(self.order):
            cs, kk = [], k
            for _ in range(self.f):
                cs.append(kk % self.p)
                kk //= self.p
            yield FFElem(self, tuple(cs))

    def __repr__(self):
        return f"FF({self.p},{self.f})"


class FFElem:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: FF, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    def _poly(self) -> FPoly:
        return ftrim(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, FFElem)
            and self.field is other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __add__(self, other):
        return self.field.element(fadd(self._poly(), other._poly(), self.field.p))

    def __sub__(self, other):
        return self.field.element(fsub(self._poly(), other._poly(), self.field.p))

    def __neg__(self):
        return self.field.element(fneg(self._poly(), self.field.p))

    def __mul__(self, other):
        F = self.field
        return F.element(fmod(fmul(self._poly(), other._poly(), F.p), F.modulus, F.p))

    def __pow__(self, e: int):
        F = self.field
        if e < 0:
            return self.inverse() ** (-e)
        return F.element(fpowmod(self._poly(), e, F.modulus, F.p))

    def inverse(self) -> "FFElem":
        if self.is_zero:
            raise ZeroElement("inverse of zero in a finite field")
        return self ** (self.field.order - 2)

    def key(self) -> int:
        """Base-p integer encoding; fixes the canonical element order."""
        k = 0
        for c in reversed(self.coeffs):
            k = k * self.field.p + c
        return k

    def __repr__(self):
        return f"FFElem({self.field!r},{list(self.coeffs)})"


def ffield_order(x: FFElem) -> int:
    """Multiplicative order; ZeroElement on 0."""
    if x.is_zero:
        raise ZeroElement("order of zero requested")
    n = x.field.order - 1
    order = n
    for q in _prime_divisors(n):
        while order % q == 0 and (x ** (order // q)) == x.field.one():
            order //= q
    return order


def ff_is_square(x: FFElem) -> bool:
    if x.is_zero:
        return True
    q = x.field.order
    if q % 2 == 0:
        return True
    return x ** ((q - 1) // 2) == x.field.one()
