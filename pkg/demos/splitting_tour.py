"""How rational primes decompose in a few small fields, plus one tower step."""

from prime_scope import (
    NumberField,
    parse_poly,
    primes_above,
    quadratic_step_search,
    format_element,
)

for text in ("X^2+1", "X^2-2", "X^3-2"):
    K = NumberField(parse_poly(text))
    print(f"K = Q[X]/({text}), degree {K.degree}, {len(K.orderings())} orderings")
    for p in (2, 3, 5, 7, 11, 13):
        primes = primes_above(K, p)
        shape = " ".join(f"(e={P.e},f={P.f})" for P in primes)
        check = sum(P.e * P.f for P in primes)
        print(f"  p={p:>2}: {len(primes)} prime(s) {shape}  [sum ef = {check}]")
    print()

# make 5 inert, then split, by a quadratic step from Q
Q = NumberField(parse_poly("X"))
for want in ("inert", "split", "ramified"):
    d = quadratic_step_search(Q, 5, [(0, want)])
    print(f"smallest d with 5 {want} in Q(sqrt(d)): d = {format_element(d)}")
