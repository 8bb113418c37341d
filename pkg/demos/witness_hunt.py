"""Denseness witnesses: one prime, one ordering, then several places at once.

The defining membership 1 - g(x)^2 a^{-2} in O_P is re-checked exactly for
every witness the searches return.
"""

from prime_scope import (
    KPoly,
    NumberField,
    d_witness,
    format_element,
    in_ring,
    parse_poly,
    primes_above,
    ud_witness,
    weak_approx_value,
)


def kp(K, text):
    return KPoly(K, [K.rational(c) for c in parse_poly(text).coeffs])


Q = NumberField(parse_poly("X"))
P5 = primes_above(Q, 5)[0]
g = kp(Q, "X^2+1")
a = Q.rational(125)
w = d_witness(P5, g, a)
r = Q.one() - g(w.witness) ** 2 * a.inverse() ** 2
print(f"5-adic: g = X^2+1, a = 125 -> x = {format_element(w.witness)}"
      f" ({w.search_stats['steps']} steps), 1 - g(x)^2/a^2 integral: {in_ring(P5, r)}")

K2 = NumberField(parse_poly("X^2-2"))
O = K2.orderings()[1]
g2 = kp(K2, "X^2-2")
a2 = K2.rational(1) / K2.rational(100)
w2 = d_witness(O, g2, a2)
print(f"ordering: g = X^2-2, a = 1/100 -> x = {format_element(w2.witness)}")

gauss = NumberField(parse_poly("X^2+1"))
S = primes_above(gauss, 13)
w3 = ud_witness(gauss, S, kp(gauss, "X^2-3"), gauss.rational(169))
print(f"both primes above 13 in Q(i): shared witness x = {format_element(w3.witness)}")

x = weak_approx_value(gauss, [([S[0]], S[0].uniformizer), ([S[1]], gauss.one())])
print(f"weak approximation: v={1} at one prime above 13, v={0} at the other"
      f" -> {format_element(x)}")
