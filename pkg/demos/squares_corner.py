"""Sums of squares: four-square decompositions, finite-field levels, the
Kochen operator, and the two certification searches."""

from fractions import Fraction

from prime_scope import (
    KPoly,
    NumberField,
    d_sos_witness,
    format_element,
    four_squares,
    kochen,
    level_finite_field,
    no_short_representation_check,
    parse_poly,
    primes_above,
)


def kp(K, text):
    return KPoly(K, [K.rational(c) for c in parse_poly(text).coeffs])


for q in (7, 310, Fraction(1, 2)):
    dec = four_squares(q)
    print(f"{q} = " + " + ".join(f"({c})^2" for c in dec.parts))

print()
print("levels of prime fields:", {p: level_finite_field(p, 1) for p in (3, 5, 7, 11, 13)})

Q = NumberField(parse_poly("X"))
for x in (2, Fraction(1, 3)):
    v = kochen(3, Q.rational(x))
    print(f"gamma_3({x}) = {format_element(v.value)}")

print()
P3 = primes_above(Q, 3)[0]
r = no_short_representation_check(P3, kp(Q, "X^2+1"), Q.rational(3), 2, 1000)
print(f"no x with g(x)^2 + y^2 = 9 at height <= 1000: {r.status}"
      f" after {r.searched} candidates")

w = d_sos_witness(Q, kp(Q, "X^3-2"), Q.rational(1))
print(f"witness with 1 - g(x)^2 a sum of squares: x = {format_element(w.witness)}")
