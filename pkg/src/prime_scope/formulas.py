"""First-order formulas over the ring language with a holomorphy predicate R.

Terms are trees over constants, variables, +, *, and a formal inverse;
formulas add =, R(term), the propositional connectives, and quantifiers.
R^x(t), "t is a unit of R", is sugar for R(t) and R(1/t) and is expanded at
emission time, so printed formulas contain only the core connectives.

The emitters produce the three families used throughout:

  phi_n   -- an n-variable form built from a polynomial g whose reduction mod
             p has no zero in F_{p^f_abs}; it detects "some argument is a
             p-adic unit" through its valuation.
  chi     -- the two-parameter cut that picks primes of type tau out of the
             set of all primes above p.
  nu      -- the axiom sentence "for all y != 0 there are x_0..x_{n-1} making
             phi_n(y^(e!) p^i x_i^n) a unit", witnessing that value groups
             are Z-groups.

Text form is s-expressions; see parse/print near the bottom.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .config import DEFAULT, Config
from .errors import FormulaSyntaxError, InverseOfZero, Unsupported
from .ffield import is_irreducible
from .numberfield import FieldElement, NumberField, elements_by_height
from .primes import PrimeType, holomorphy_member, is_infinite_place, primes_of_type
from .qpoly import QPoly


# ---------------------------------------------------------------------------
# term and formula ASTs (immutable, structurally hashable)
# ---------------------------------------------------------------------------


class Term:
    __slots__ = ()


class TConst(Term):
    """Constant from the field: a Fraction, or a coordinate vector (length
    >= 2, trailing zeros stripped) for elements outside the prime field."""

    __slots__ = ("value",)

    def __init__(self, value):
        if isinstance(value, FieldElement):
            coords = list(value.coords)
            while len(coords) > 1 and coords[-1] == 0:
                coords.pop()
            value = coords[0] if len(coords) == 1 else tuple(coords)
        elif isinstance(value, tuple):
            coords = list(value)
            while len(coords) > 1 and coords[-1] == 0:
                coords.pop()
            value = coords[0] if len(coords) == 1 else tuple(coords)
        elif isinstance(value, int):
            value = Fraction(value)
        self.value = value

    def __eq__(self, other):
        return isinstance(other, TConst) and self.value == other.value

    def __hash__(self):
        return hash(("c", self.value))

    def __repr__(self):
        return print_term(self)


class TVar(Term):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __eq__(self, other):
        return isinstance(other, TVar) and self.name == other.name

    def __hash__(self):
        return hash(("v", self.name))

    def __repr__(self):
        return self.name


class TAdd(Term):
    __slots__ = ("a", "b")

    def __init__(self, a: Term, b: Term):
        self.a, self.b = a, b

    def __eq__(self, other):
        return isinstance(other, TAdd) and (self.a, self.b) == (other.a, other.b)

    def __hash__(self):
        return hash(("+", self.a, self.b))

    def __repr__(self):
        return print_term(self)


class TMul(Term):
    __slots__ = ("a", "b")

    def __init__(self, a: Term, b: Term):
        self.a, self.b = a, b

    def __eq__(self, other):
        return isinstance(other, TMul) and (self.a, self.b) == (other.a, other.b)

    def __hash__(self):
        return hash(("*", self.a, self.b))

    def __repr__(self):
        return print_term(self)


class TInv(Term):
    __slots__ = ("a",)

    def __init__(self, a: Term):
        self.a = a

    def __eq__(self, other):
        return isinstance(other, TInv) and self.a == other.a

    def __hash__(self):
        return hash(("inv", self.a))

    def __repr__(self):
        return print_term(self)


class Formula:
    __slots__ = ()

    def __repr__(self):
        return print_formula(self)


class FEq(Formula):
    __slots__ = ("a", "b")

    def __init__(self, a: Term, b: Term):
        self.a, self.b = a, b

    def __eq__(self, other):
        return isinstance(other, FEq) and (self.a, self.b) == (other.a, other.b)

    def __hash__(self):
        return hash(("=", self.a, self.b))


class FR(Formula):
    __slots__ = ("t",)

    def __init__(self, t: Term):
        self.t = t

    def __eq__(self, other):
        return isinstance(other, FR) and self.t == other.t

    def __hash__(self):
        return hash(("R", self.t))


class FNot(Formula):
    __slots__ = ("f",)

    def __init__(self, f: Formula):
        self.f = f

    def __eq__(self, other):
        return isinstance(other, FNot) and self.f == other.f

    def __hash__(self):
        return hash(("not", self.f))


class FAnd(Formula):
    __slots__ = ("args",)

    def __init__(self, args):
        self.args = tuple(args)
        if len(self.args) < 2:
            raise ValueError("conjunction needs at least two conjuncts")

    def __eq__(self, other):
        return isinstance(other, FAnd) and self.args == other.args

    def __hash__(self):
        return hash(("and", self.args))


class FOr(Formula):
    __slots__ = ("args",)

    def __init__(self, args):
        self.args = tuple(args)
        if len(self.args) < 2:
            raise ValueError("disjunction needs at least two disjuncts")

    def __eq__(self, other):
        return isinstance(other, FOr) and self.args == other.args

    def __hash__(self):
        return hash(("or", self.args))


class FImp(Formula):
    __slots__ = ("a", "b")

    def __init__(self, a: Formula, b: Formula):
        self.a, self.b = a, b

    def __eq__(self, other):
        return isinstance(other, FImp) and (self.a, self.b) == (other.a, other.b)

    def __hash__(self):
        return hash(("->", self.a, self.b))


class FAll(Formula):
    __slots__ = ("var", "body")

    def __init__(self, var: str, body: Formula):
        self.var, self.body = var, body

    def __eq__(self, other):
        return isinstance(other, FAll) and (self.var, self.body) == (other.var, other.body)

    def __hash__(self):
        return hash(("forall", self.var, self.body))


class FEx(Formula):
    __slots__ = ("var", "body")

    def __init__(self, var: str, body: Formula):
        self.var, self.body = var, body

    def __eq__(self, other):
        return isinstance(other, FEx) and (self.var, self.body) == (other.var, other.body)

    def __hash__(self):
        return hash(("exists", self.var, self.body))


def r_unit(t: Term) -> Formula:
    """R^x(t) desugared: R(t) and R(t^-1)."""
    return FAnd((FR(t), FR(TInv(t))))


def conjunction(parts) -> Formula:
    parts = list(parts)
    if not parts:
        raise ValueError("empty conjunction")
    return parts[0] if len(parts) == 1 else FAnd(parts)


def substitute(phi: Formula, mapping: dict) -> Formula:
    """Substitute terms for free variables; bound occurrences are left alone.
    Substituted terms are expected to be closed (constants), as in every use
    here, so no alpha-renaming is attempted."""

    def form(f: Formula, shadowed: frozenset) -> Formula:
        if isinstance(f, FEq):
            return FEq(term_sh(f.a, shadowed), term_sh(f.b, shadowed))
        if isinstance(f, FR):
            return FR(term_sh(f.t, shadowed))
        if isinstance(f, FNot):
            return FNot(form(f.f, shadowed))
        if isinstance(f, FAnd):
            return FAnd(tuple(form(g, shadowed) for g in f.args))
        if isinstance(f, FOr):
            return FOr(tuple(form(g, shadowed) for g in f.args))
        if isinstance(f, FImp):
            return FImp(form(f.a, shadowed), form(f.b, shadowed))
        if isinstance(f, (FAll, FEx)):
            inner = shadowed | {f.var}
            body = form(f.body, inner)
            return type(f)(f.var, body)
        raise TypeError(f"not a formula node: {f!r}")

    def term_sh(t: Term, shadowed: frozenset) -> Term:
        if isinstance(t, TVar):
            if t.name in shadowed:
                return t
            return mapping.get(t.name, t)
        if isinstance(t, TAdd):
            return TAdd(term_sh(t.a, shadowed), term_sh(t.b, shadowed))
        if isinstance(t, TMul):
            return TMul(term_sh(t.a, shadowed), term_sh(t.b, shadowed))
        if isinstance(t, TInv):
            return TInv(term_sh(t.a, shadowed))
        return t

    return form(phi, frozenset())


# ---------------------------------------------------------------------------
# multivariate polynomials over Q (sparse; only what phi_n needs)
# ---------------------------------------------------------------------------


class MPoly:
    """Polynomial in a fixed number of variables, {exponent tuple: coeff}."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict):
        self.nvars = nvars
        self.terms = {e: Fraction(c) for e, c in terms.items() if c != 0}

    @staticmethod
    def const(nvars: int, c) -> "MPoly":
        return MPoly(nvars, {(0,) * nvars: Fraction(c)})

    @staticmethod
    def var(nvars: int, i: int) -> "MPoly":
        e = [0] * nvars
        e[i] = 1
        return MPoly(nvars, {tuple(e): Fraction(1)})

    def __add__(self, other: "MPoly") -> "MPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return MPoly(self.nvars, out)

    def __mul__(self, other: "MPoly") -> "MPoly":
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MPoly(self.nvars, out)

    def __pow__(self, k: int) -> "MPoly":
        acc = MPoly.const(self.nvars, 1)
        for _ in range(k):
            acc = acc * self
        return acc

    def substitute(self, args: list) -> "MPoly":
        """Plug MPoly arguments (all in the same target variable set)."""
        assert len(args) == self.nvars and args
        n = args[0].nvars
        acc = MPoly(n, {})
        for e, c in self.terms.items():
            mono = MPoly.const(n, c)
            for i, k in enumerate(e):
                if k:
                    mono = mono * args[i] ** k
            acc = acc + mono
        return acc

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __call__(self, values: list) -> FieldElement:
        """Evaluate at FieldElements of one field."""
        K = values[0].field
        acc = K.zero()
        pows: dict = {}
        for e, c in self.terms.items():
            part = K.rational(c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in pows:
                        pows[key] = values[i] ** k
                    part = part * pows[key]
            acc = acc + part
        return acc

    def __eq__(self, other):
        return (
            isinstance(other, MPoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __repr__(self):
        return f"MPoly({self.nvars}, {self.terms})"


# ---------------------------------------------------------------------------
# phi_n
# ---------------------------------------------------------------------------


def _least_prime_above(n: int) -> int:
    k = n + 1
    while True:
        if k > 1 and all(k % d for d in range(2, int(math.isqrt(k)) + 1)):
            return k
        k += 1


def rootless_poly(p: int, f_abs: int) -> QPoly:
    """Least monic integer polynomial (constant-coefficient-major scan over
    lifts in [0,p)) of the least prime degree > f_abs that is irreducible mod
    p.  Prime degree l > f_abs makes its roots generate F_{p^l}, which meets
    F_{p^f_abs} only in F_p, so the reduction has no zero there."""
    ell = _least_prime_above(f_abs)
    # (c_0, c_1, ..., c_{l-1}) lexicographically ascending: the constant
    # coefficient is the most significant digit of the counter
    for code in range(p**ell):
        coeffs = [(code // p ** (ell - 1 - i)) % p for i in range(ell)]
        if is_irreducible(tuple(coeffs + [1]), p):
            return QPoly([Fraction(c) for c in coeffs] + [Fraction(1)])
    raise AssertionError("no irreducible polynomial found; unreachable")


def build_phi_n(p: int, f_abs: int, n: int):
    """(g, phi_n): g monic over Z with rootless reduction in F_{p^f_abs};
    phi_1 = X_1, phi_2 = Y^deg(g) g(X/Y), phi_n = phi_2(X_1, phi_{n-1}(...))."""
    if n < 1:
        raise ValueError("n must be positive")
    g = rootless_poly(p, f_abs)
    ell = g.degree
    if n == 1:
        return g, MPoly.var(1, 0)
    phi2 = MPoly(2, {(k, ell - k): g.coeff(k) for k in range(ell + 1)})
    phi = phi2
    for m in range(3, n + 1):
        x1 = MPoly.var(m, 0)
        shifted = MPoly(m, {(0,) + e: c for e, c in phi.terms.items()})
        phi = phi2.substitute([x1, shifted])
    return g, phi


# ---------------------------------------------------------------------------
# chi and nu emitters
# ---------------------------------------------------------------------------


def _tpow(t: Term, k: int) -> Term:
    if k == 0:
        return TConst(Fraction(1))
    acc = t
    for _ in range(k - 1):
        acc = TMul(acc, t)
    return acc


def emit_chi(p, tau: PrimeType) -> Formula:
    """Free variables t, s.  R^x(t^e / p) and R^x(s) and, for every proper
    divisor n of p^f - 1, R^x(s^n - 1).  For the infinite place: t = t."""
    t, s = TVar("t"), TVar("s")
    if is_infinite_place(p):
        return FEq(t, t)
    conj = [r_unit(TMul(_tpow(t, tau.e), TConst(Fraction(1, p))))]
    conj.append(r_unit(s))
    m = p**tau.f - 1
    for n in range(1, m):
        if m % n == 0:
            conj.append(r_unit(TAdd(_tpow(s, n), TConst(Fraction(-1)))))
    return conjunction(conj)


def _phi_term(g: QPoly, us: list) -> Term:
    """phi_n as a nested term: phi_2(u_0, phi_2(u_1, ...)) without expansion."""
    if len(us) == 1:
        return us[0]
    ell = g.degree
    b = _phi_term(g, us[1:])
    a = us[0]
    parts = []
    for k in range(ell, -1, -1):
        c = g.coeff(k)
        if c == 0:
            continue
        mono_factors = []
        if c != 1:
            mono_factors.append(TConst(c))
        if k:
            mono_factors.append(_tpow(a, k))
        if ell - k:
            mono_factors.append(_tpow(b, ell - k))
        if not mono_factors:
            mono_factors = [TConst(Fraction(1))]
        mono = mono_factors[0]
        for fct in mono_factors[1:]:
            mono = TMul(mono, fct)
        parts.append(mono)
    acc = parts[0]
    for q in parts[1:]:
        acc = TAdd(acc, q)
    return acc


def _nu_parts(p: int, tau: PrimeType, n: int):
    """(g, phi MPoly, x-variable names, inner R^x formula) for nu_{p,n}^tau."""
    g, phi = build_phi_n(p, tau.f, n)
    efact = math.factorial(tau.e)
    xs = [f"x{i}" for i in range(n)]
    us = []
    for i in range(n):
        factors = [_tpow(TVar("y"), efact)]
        if i:
            factors.append(TConst(Fraction(p**i)))
        factors.append(_tpow(TVar(xs[i]), n))
        u = factors[0]
        for fct in factors[1:]:
            u = TMul(u, fct)
        us.append(u)
    inner = r_unit(_phi_term(g, us))
    return g, phi, xs, inner


def emit_nu(p: int, tau: PrimeType, n: int) -> Formula:
    """forall y (y != 0 -> exists x_0..x_{n-1} R^x(phi_n(y^(e!) p^i x_i^n)))."""
    if is_infinite_place(p):
        raise Unsupported("nu is defined for finite p only")
    _, _, xs, inner = _nu_parts(p, tau, n)
    body = inner
    for name in reversed(xs):
        body = FEx(name, body)
    return FAll("y", FImp(FNot(FEq(TVar("y"), TConst(Fraction(0)))), body))


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def _eval_term(K: NumberField, t: Term, env: dict) -> FieldElement:
    if isinstance(t, TConst):
        if isinstance(t.value, tuple):
            if len(t.value) > K.degree:
                raise ValueError(f"constant {t!r} does not fit in a degree-{K.degree} field")
            return K.element(list(t.value) + [Fraction(0)] * (K.degree - len(t.value)))
        return K.rational(t.value)
    if isinstance(t, TVar):
        if t.name not in env:
            raise ValueError(f"free variable {t.name} in quantifier-free evaluation")
        return env[t.name]
    if isinstance(t, TAdd):
        return _eval_term(K, t.a, env) + _eval_term(K, t.b, env)
    if isinstance(t, TMul):
        return _eval_term(K, t.a, env) * _eval_term(K, t.b, env)
    if isinstance(t, TInv):
        v = _eval_term(K, t.a, env)
        if v.is_zero:
            raise InverseOfZero("formal inverse of a term evaluating to 0")
        return v.inverse()
    raise TypeError(f"not a term node: {t!r}")


def _eval_qf(K, phi: Formula, env: dict, r_member) -> bool:
    if isinstance(phi, FEq):
        return _eval_term(K, phi.a, env) == _eval_term(K, phi.b, env)
    if isinstance(phi, FR):
        return r_member(_eval_term(K, phi.t, env))
    if isinstance(phi, FNot):
        return not _eval_qf(K, phi.f, env, r_member)
    if isinstance(phi, FAnd):
        return all(_eval_qf(K, g, env, r_member) for g in phi.args)
    if isinstance(phi, FOr):
        return any(_eval_qf(K, g, env, r_member) for g in phi.args)
    if isinstance(phi, FImp):
        return (not _eval_qf(K, phi.a, env, r_member)) or _eval_qf(K, phi.b, env, r_member)
    raise ValueError("formula is not quantifier-free")


def eval_qf(K: NumberField, p, tau: PrimeType, phi: Formula, r_member=None) -> bool:
    """Evaluate a closed quantifier-free formula; R(t) means membership in the
    holomorphy ring R_p^tau(K) unless a custom r_member predicate is given."""
    if r_member is None:
        r_member = lambda x: holomorphy_member(K, p, tau, x)
    return _eval_qf(K, phi, {}, r_member)


class EvalVerdict:
    """Proven | Refuted | Unknown(bound); Proven/Refuted carry the witness or
    counterexample that discharged the outermost quantifier, when there is
    one."""

    __slots__ = ("status", "bound", "witness")

    def __init__(self, status: str, bound=None, witness=None):
        self.status = status
        self.bound = bound
        self.witness = witness

    def to_json(self) -> dict:
        out = {"status": self.status}
        if self.bound is not None:
            out["bound"] = self.bound
        if self.witness is not None:
            from .numberfield import format_element

            out["witness"] = format_element(self.witness)
        return out

    def __repr__(self):
        extra = f", bound={self.bound}" if self.bound is not None else ""
        extra += f", witness={self.witness!r}" if self.witness is not None else ""
        return f"EvalVerdict({self.status}{extra})"


def _is_qf(phi: Formula) -> bool:
    if isinstance(phi, (FAll, FEx)):
        return False
    if isinstance(phi, (FEq, FR)):
        return True
    if isinstance(phi, FNot):
        return _is_qf(phi.f)
    if isinstance(phi, (FAnd, FOr)):
        return all(_is_qf(g) for g in phi.args)
    if isinstance(phi, FImp):
        return _is_qf(phi.a) and _is_qf(phi.b)
    raise TypeError(f"not a formula node: {phi!r}")


def eval_bounded(
    K: NumberField, p, tau: PrimeType, phi: Formula, height_bound: int | None = None
) -> EvalVerdict:
    """Three-valued bounded evaluation.

    Existentials are Proven only by an exactly verified witness from the
    canonical height enumeration; universals are Refuted only by a verified
    counterexample; everything else is Unknown(bound).  An inverse-of-zero
    inside the search skips that candidate rather than erroring.
    """
    bound = height_bound if height_bound is not None else DEFAULT.height_bound
    r_member = lambda x: holomorphy_member(K, p, tau, x)

    def rec(f: Formula, env: dict) -> EvalVerdict:
        if _is_qf(f):
            try:
                ok = _eval_qf(K, f, env, r_member)
            except InverseOfZero:
                return EvalVerdict("Unknown", bound=bound)
            return EvalVerdict("Proven" if ok else "Refuted")
        if isinstance(f, FEx):
            for i, cand in enumerate(elements_by_height(K)):
                if i >= bound:
                    break
                sub = rec(f.body, {**env, f.var: cand})
                if sub.status == "Proven":
                    return EvalVerdict("Proven", witness=cand)
            return EvalVerdict("Unknown", bound=bound)
        if isinstance(f, FAll):
            for i, cand in enumerate(elements_by_height(K)):
                if i >= bound:
                    break
                sub = rec(f.body, {**env, f.var: cand})
                if sub.status == "Refuted":
                    return EvalVerdict("Refuted", witness=cand)
            return EvalVerdict("Unknown", bound=bound)
        if isinstance(f, FNot):
            sub = rec(f.f, env)
            if sub.status == "Proven":
                return EvalVerdict("Refuted")
            if sub.status == "Refuted":
                return EvalVerdict("Proven")
            return sub
        if isinstance(f, FAnd):
            unknown = None
            for g in f.args:
                sub = rec(g, env)
                if sub.status == "Refuted":
                    return sub
                if sub.status == "Unknown":
                    unknown = sub
            return unknown or EvalVerdict("Proven")
        if isinstance(f, FOr):
            unknown = None
            for g in f.args:
                sub = rec(g, env)
                if sub.status == "Proven":
                    return sub
                if sub.status == "Unknown":
                    unknown = sub
            return unknown or EvalVerdict("Refuted")
        if isinstance(f, FImp):
            return rec(FOr((FNot(f.a), f.b)), env)
        raise TypeError(f"not a formula node: {f!r}")

    return rec(phi, {})


def prove_nu(K: NumberField, p: int, tau: PrimeType, n: int, config: Config = DEFAULT) -> EvalVerdict:
    """Sound discharge of the nu sentence over K.

    The inner matrix R^x(phi_n(...)) depends on y only through the valuations
    v_P(y) mod n: replacing y by y' with the same residues shifts each
    v_P(u_i) by a multiple of n, which a rescaling of x_i absorbs.  So it
    suffices to check one representative y per residue pattern; each check
    instantiates the matrix with a zgroup_witness tuple and evaluates it
    exactly.  Requires S_p^tau(K) = S_p^{=tau}(K) so that the witness
    guarantee covers every prime R quantifies over.
    """
    from .dense import weak_approx_value, zgroup_witness

    S_le = primes_of_type(K, p, tau, exact=False)
    S_eq = primes_of_type(K, p, tau, exact=True)
    if S_le != S_eq:
        raise Unsupported(
            "pattern discharge needs the exact-type and below-type prime sets to agree"
        )
    if not S_eq:
        return EvalVerdict("Proven")
    _, _, xs, inner = _nu_parts(p, tau, n)

    def patterns(k: int):
        if k == 0:
            yield ()
            return
        for rest in patterns(k - 1):
            for j in range(n):
                yield rest + (j,)

    for pat in patterns(len(S_eq)):
        parts = [([P], P.uniformizer ** j) for P, j in zip(S_eq, pat)]
        y = weak_approx_value(K, parts, config)
        witness = zgroup_witness(K, p, tau, n, y, config)
        env = {"y": TConst(y)}
        for name, x in zip(xs, witness):
            env[name] = TConst(x)
        if not eval_qf(K, p, tau, substitute(inner, env)):
            return EvalVerdict("Refuted", witness=y)
    return EvalVerdict("Proven")


# ---------------------------------------------------------------------------
# s-expression text form
# ---------------------------------------------------------------------------

_FORMULA_HEADS = {"=", "R", "not", "and", "or", "->", "forall", "exists"}
_TERM_HEADS = {"+", "*", "inv"}


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def print_term(t: Term) -> str:
    if isinstance(t, TConst):
        if isinstance(t.value, tuple):
            return "[" + ", ".join(_fmt_fraction(c) for c in t.value) + "]"
        return _fmt_fraction(t.value)
    if isinstance(t, TVar):
        return t.name
    if isinstance(t, TAdd):
        return f"(+ {print_term(t.a)} {print_term(t.b)})"
    if isinstance(t, TMul):
        return f"(* {print_term(t.a)} {print_term(t.b)})"
    if isinstance(t, TInv):
        return f"(inv {print_term(t.a)})"
    raise TypeError(f"not a term node: {t!r}")


def print_formula(phi: Formula) -> str:
    if isinstance(phi, FEq):
        return f"(= {print_term(phi.a)} {print_term(phi.b)})"
    if isinstance(phi, FR):
        return f"(R {print_term(phi.t)})"
    if isinstance(phi, FNot):
        return f"(not {print_formula(phi.f)})"
    if isinstance(phi, FAnd):
        return "(and " + " ".join(print_formula(g) for g in phi.args) + ")"
    if isinstance(phi, FOr):
        return "(or " + " ".join(print_formula(g) for g in phi.args) + ")"
    if isinstance(phi, FImp):
        return f"(-> {print_formula(phi.a)} {print_formula(phi.b)})"
    if isinstance(phi, FAll):
        return f"(forall {phi.var} {print_formula(phi.body)})"
    if isinstance(phi, FEx):
        return f"(exists {phi.var} {print_formula(phi.body)})"
    raise TypeError(f"not a formula node: {phi!r}")


_RAT = re.compile(r"^-?\d+(?:/\d+)?$")
_SYM = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


def _tokenize(text: str):
    toks = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "()":
            toks.append((ch, i))
            i += 1
            continue
        if ch == "[":
            j = text.find("]", i)
            if j < 0:
                raise FormulaSyntaxError(f"unterminated '[' at position {i}")
            toks.append((text[i : j + 1], i))
            i = j + 1
            continue
        j = i
        while j < len(text) and not text[j].isspace() and text[j] not in "()[]":
            j += 1
        toks.append((text[i:j], i))
        i = j
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, len(self.text))

    def next(self):
        tok = self.peek()
        if tok[0] is None:
            raise FormulaSyntaxError(f"unexpected end of input at position {tok[1]}")
        self.pos += 1
        return tok

    def expect(self, what: str):
        tok, at = self.next()
        if tok != what:
            raise FormulaSyntaxError(f"expected {what!r} at position {at}, got {tok!r}")

    def atom_term(self, tok: str, at: int) -> Term:
        if _RAT.match(tok):
            return TConst(Fraction(tok))
        if tok.startswith("["):
            body = tok[1:-1].strip()
            parts = [s.strip() for s in body.split(",")] if body else []
            for s in parts:
                if not _RAT.match(s):
                    raise FormulaSyntaxError(f"bad coordinate {s!r} at position {at}")
            if not parts:
                raise FormulaSyntaxError(f"empty coordinate vector at position {at}")
            return TConst(tuple(Fraction(s) for s in parts))
        if _SYM.match(tok) and tok not in _FORMULA_HEADS and tok not in _TERM_HEADS:
            return TVar(tok)
        raise FormulaSyntaxError(f"expected a term at position {at}, got {tok!r}")

    def term(self) -> Term:
        tok, at = self.next()
        if tok != "(":
            return self.atom_term(tok, at)
        head, hat = self.next()
        if head == "+":
            a, b = self.term(), self.term()
            self.expect(")")
            return TAdd(a, b)
        if head == "*":
            a, b = self.term(), self.term()
            self.expect(")")
            return TMul(a, b)
        if head == "inv":
            a = self.term()
            self.expect(")")
            return TInv(a)
        raise FormulaSyntaxError(f"unknown term head {head!r} at position {hat}")

    def formula(self) -> Formula:
        tok, at = self.next()
        if tok != "(":
            raise FormulaSyntaxError(f"expected '(' at position {at}, got {tok!r}")
        head, hat = self.next()
        if head == "=":
            a, b = self.term(), self.term()
            self.expect(")")
            return FEq(a, b)
        if head == "R":
            t = self.term()
            self.expect(")")
            return FR(t)
        if head == "not":
            f = self.formula()
            self.expect(")")
            return FNot(f)
        if head in ("and", "or"):
            args = []
            while self.peek()[0] != ")":
                args.append(self.formula())
            self.expect(")")
            if len(args) < 2:
                raise FormulaSyntaxError(
                    f"{head} needs at least two arguments at position {hat}"
                )
            return FAnd(args) if head == "and" else FOr(args)
        if head == "->":
            a, b = self.formula(), self.formula()
            self.expect(")")
            return FImp(a, b)
        if head in ("forall", "exists"):
            var, vat = self.next()
            if not _SYM.match(var or "") or var in _FORMULA_HEADS | _TERM_HEADS:
                raise FormulaSyntaxError(f"bad bound variable at position {vat}")
            body = self.formula()
            self.expect(")")
            return FAll(var, body) if head == "forall" else FEx(var, body)
        raise FormulaSyntaxError(f"unknown formula head {head!r} at position {hat}")


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    phi = p.formula()
    tok, at = p.peek()
    if tok is not None:
        raise FormulaSyntaxError(f"trailing input at position {at}: {tok!r}")
    return phi
