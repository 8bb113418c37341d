"""The formula families: unit-detecting polynomials, chi, nu, and evaluation."""

from prime_scope import (
    NumberField,
    PrimeType,
    build_phi_n,
    emit_chi,
    emit_nu,
    eval_bounded,
    parse_formula,
    parse_poly,
    print_formula,
    primes_above,
    prove_nu,
    valuation,
    zgroup_witness,
)

tau = PrimeType(1, 1)

g, phi2 = build_phi_n(5, 1, 2)
print("phi_2 for p=5 comes from the rootless reduction g =", g)

Q = NumberField(parse_poly("X"))
P5 = primes_above(Q, 5)[0]
y = Q.rational(5)
xs = zgroup_witness(Q, 5, tau, 2, y)
val = phi2([y * xs[0] ** 2, y * Q.rational(5) * xs[1] ** 2])
print(f"value-group witness for y=5, n=2: phi_2 lands on {val}, v_5 = {valuation(P5, val)}")

print()
print("chi_5^(1,1):", print_formula(emit_chi(5, tau)))
print()
nu = emit_nu(5, tau, 1)
print("nu_{5,1}:", print_formula(nu))
print("round-trips through the parser:", parse_formula(print_formula(nu)) == nu)
print()

verdict = prove_nu(Q, 5, tau, 2)
print("prove_nu(Q, 5, (1,1), 2):", verdict.status)

exists = parse_formula("(exists x (= (* x x) 4))")
print("bounded evaluation of 'some square is 4':", eval_bounded(Q, 5, tau, exists).to_json())
