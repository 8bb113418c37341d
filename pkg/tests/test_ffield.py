"""Finite fields and factorization mod p."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from prime_scope.errors import NotPIntegral, ZeroElement
from prime_scope.ffield import (
    FF,
    factor_fpoly,
    ff_is_square,
    ffield_order,
    irreducible_poly,
    poly_factor_mod_p,
)
from prime_scope.qpoly import QPoly, parse_poly

from oracles import oracle_factor_mod_p


def test_factor_pinned_split():
    # X^2+1 at 5 splits into X+2, X+3
    fs = poly_factor_mod_p(parse_poly("X^2+1"), 5)
    assert [(tuple(int(c) for c in f.coeffs), m) for f, m in fs] == [
        ((2, 1), 1),
        ((3, 1), 1),
    ]


def test_factor_pinned_ramified():
    fs = poly_factor_mod_p(parse_poly("X^2+1"), 2)
    assert [(tuple(int(c) for c in f.coeffs), m) for f, m in fs] == [((1, 1), 2)]


def test_factor_rejects_non_p_integral():
    with pytest.raises(NotPIntegral):
        poly_factor_mod_p(QPoly([Fraction(1, 5), 0, 1]), 5)


def test_factor_reexpansion_randomized():
    rng = random.Random(20240517)
    primes = [2, 3, 5, 7, 11, 13]
    for _ in range(1000):
        p = rng.choice(primes)
        deg = rng.randint(1, 6)
        coeffs = [rng.randrange(p) for _ in range(deg)] + [1]
        a = tuple(coeffs)
        if not any(a[:-1]) and len(a) == 1:
            continue
        fs = factor_fpoly(a, p)
        # multiply back
        prod = (1,)
        from prime_scope.ffield import fmul

        for f, m in fs:
            for _ in range(m):
                prod = fmul(prod, f, p)
        assert prod == a


def test_factor_matches_sympy_oracle():
    rng = random.Random(99)
    for _ in range(120):
        p = rng.choice([2, 3, 5, 7, 13])
        deg = rng.randint(1, 6)
        coeffs = [rng.randrange(p) for _ in range(deg)] + [1]
        mine = [
            (tuple(int(c) for c in f.coeffs), m)
            for f, m in poly_factor_mod_p(QPoly(coeffs), p)
        ]
        assert mine == oracle_factor_mod_p(coeffs, p)


def test_irreducible_poly_pinned():
    assert irreducible_poly(2, 2) == parse_poly("X^2+X+1")
    assert irreducible_poly(3, 1) == parse_poly("X")
    assert irreducible_poly(5, 2) == parse_poly("X^2+2")


def test_irreducible_poly_is_irreducible():
    for p in (2, 3, 5, 7):
        for d in (1, 2, 3, 4):
            m = irreducible_poly(p, d)
            assert m.degree == d and m.is_monic
            fs = poly_factor_mod_p(m, p)
            assert len(fs) == 1 and fs[0][1] == 1


def test_ffield_order_pinned():
    F5 = FF(5, 1)
    assert ffield_order(F5.element([2])) == 4
    assert ffield_order(F5.element([4])) == 2
    assert ffield_order(F5.element([1])) == 1
    with pytest.raises(ZeroElement):
        ffield_order(F5.zero())


def test_ffield_order_divides_group_order():
    F = FF(3, 2)
    for x in F.elements():
        if x.is_zero:
            continue
        assert (3 ** 2 - 1) % ffield_order(x) == 0
        assert x ** ffield_order(x) == F.one()


def test_ff_arithmetic_field_axioms():
    F = FF(2, 3)
    xs = list(F.elements())
    assert len(xs) == 8
    for a in xs:
        for b in xs:
            assert (a + b) - b == a
            if not b.is_zero:
                assert (a * b) * b.inverse() == a


def test_ff_is_square_counts():
    # in odd F_q exactly (q+1)/2 elements are squares (0 included)
    for (p, f) in [(3, 1), (5, 1), (3, 2), (7, 1)]:
        F = FF(p, f)
        n = sum(1 for x in F.elements() if ff_is_square(x))
        assert n == (F.order + 1) // 2
