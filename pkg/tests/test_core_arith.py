"""Kernel arithmetic: worked examples against hand/factorial oracles, sympy cross-checks and ring laws."""

import math
from contextlib import contextmanager
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cbid import _kernel as K
from cbid.combinatorics import multinomial, rat_binomial
from cbid.errors import ArityError, BadPrimeError, PoleError
from cbid.pit import MERSENNE_61
from cbid.poly import (
    SparsePoly,
    poly_add,
    poly_eval,
    poly_eval_modp,
    poly_mul,
    poly_partial_derivative,
    poly_pow,
)
from cbid.ratfunc import (
    RationalFunction,
    rf_add,
    rf_mul,
    rf_normalize,
    rf_partial_derivative,
    rf_pow,
    rf_substitute,
)
from cbid.textfmt import parse, parse_poly

from conftest import from_sympy, poly_pairs, polys, rational_points, rfs, to_sympy

XY = ["x", "y"]


def P(text, names=XY):
    return parse_poly(text, names)


def R(text, names=XY):
    return parse(text, names)


# -- combinatorics ----------------------------------------------------------------------------


@pytest.mark.parametrize("n,r,want", [(4, 2, 6), (5, 7, 0), (10, 3, 120), (3, -1, 0), (0, 0, 1)])
def test_rat_binomial_examples(n, r, want):
    assert rat_binomial(n, r) == want
    assert isinstance(rat_binomial(n, r), Fraction)


@given(st.integers(0, 40), st.integers(-5, 45))
def test_rat_binomial_factorial_oracle(n, r):
    want = math.factorial(n) // (math.factorial(r) * math.factorial(n - r)) if 0 <= r <= n else 0
    assert rat_binomial(n, r) == want


def test_rat_binomial_rejects_negative_n():
    with pytest.raises(ValueError):
        rat_binomial(-1, 0)


@pytest.mark.parametrize("orders,want", [((1, 1, 1), 6), ((2, 0), 1), ((2, 1, 1), 12)])
def test_multinomial_examples(orders, want):
    assert multinomial(orders) == want


@given(st.lists(st.integers(0, 8), min_size=1, max_size=5))
def test_multinomial_factorial_oracle(orders):
    want = math.factorial(sum(orders)) // math.prod(math.factorial(k) for k in orders)
    assert multinomial(orders) == want


def test_large_factorials_stay_exact():
    # 25! overflows 64 bits
    assert multinomial([25]) == 1
    assert multinomial([12, 13]) == math.comb(25, 12)


# -- packed exponent keys -----------------------------------------------------------------------


@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.integers(0, K.MAX_EXPONENT), min_size=n, max_size=n)))
def test_pack_roundtrip(exps):
    n = len(exps)
    assert K.unpack(K.pack(exps, n), n) == tuple(exps)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(*[st.lists(st.integers(0, 50), min_size=n, max_size=n)] * 2)))
def test_packed_order_is_lex(pair):
    a, b = pair
    n = len(a)
    assert (K.pack(a, n) < K.pack(b, n)) == (tuple(a) < tuple(b))


def test_exponent_overflow_is_refused():
    x = SparsePoly.variable(0, 2)
    with pytest.raises(OverflowError):
        x ** (K.MAX_EXPONENT + 1)


# -- polynomial ring ------------------------------------------------------------------------------


def test_poly_examples():
    x, y = SparsePoly.variable(0, 2), SparsePoly.variable(1, 2)
    assert poly_add(x, -x).is_zero and poly_add(x, -x).terms == {}
    assert poly_mul(x + y, x - y) == P("x^2 - y^2")
    assert poly_pow(1 - x, 2) == P("1 - 2*x + x^2")
    assert poly_partial_derivative(P("x^2*y + 3*x"), 0) == P("2*x*y + 3")
    assert poly_partial_derivative(P("x^2"), 1).is_zero
    assert poly_partial_derivative(P("x^5"), 0) == P("5*x^4")
    assert poly_eval(P("x^2 + y"), (2, 3)) == 7
    assert poly_eval(SparsePoly.zero(2), (Fraction(5, 7), 11)) == 0
    assert poly_eval_modp(P("x*y"), (3, 5), MERSENNE_61) == 15


def test_zero_polynomial_keeps_its_arity():
    assert SparsePoly.zero(3).arity == 3
    with pytest.raises(ArityError):
        SparsePoly.zero(3) + SparsePoly.zero(2)


def test_arity_mismatch_is_an_error():
    with pytest.raises(ArityError):
        poly_mul(SparsePoly.variable(0, 1), SparsePoly.variable(0, 2))
    with pytest.raises(ArityError):
        poly_partial_derivative(SparsePoly.variable(0, 2), 2)
    with pytest.raises(ArityError):
        poly_eval(SparsePoly.variable(0, 2), (1,))


def test_iteration_is_descending_lex():
    p = P("y^3 + x*y + x^2 + 1")
    assert [e for e, _ in p.items()] == [(2, 0), (1, 1), (0, 3), (0, 0)]


def test_no_zero_coefficients_stored():
    p = SparsePoly(2, {(1, 0): Fraction(0), (0, 1): Fraction(2)})
    assert p.terms == {(0, 1): Fraction(2)}


def test_modp_bad_prime():
    p = SparsePoly(1, {(1,): Fraction(1, 7)})
    with pytest.raises(BadPrimeError, match="bad prime, choose another"):
        p.evaluate_mod((3,), 7)


@settings(max_examples=200)
@given(poly_pairs(3))
def test_ring_axioms(abc):
    a, b, c = abc
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=200)
@given(poly_pairs(2))
def test_mul_matches_sympy(ab):
    a, b = ab
    n = a.arity
    assert a * b == from_sympy(to_sympy(a) * to_sympy(b), n)


@settings(max_examples=50)
@given(polys(max_degree=3), st.integers(0, 4))
def test_pow_matches_repeated_product(p, e):
    want = SparsePoly.constant(1, p.arity)
    for _ in range(e):
        want = want * p
    assert p**e == want


@settings(max_examples=200)
@given(poly_pairs(2), st.data())
def test_leibniz_rule(ab, data):
    a, b = ab
    v = data.draw(st.integers(0, a.arity - 1))
    assert poly_partial_derivative(a * b, v) == poly_partial_derivative(a, v) * b + a * poly_partial_derivative(b, v)


@settings(max_examples=200)
@given(poly_pairs(2), st.data())
def test_evaluation_homomorphism(ab, data):
    a, b = ab
    pt = data.draw(rational_points(a.arity))
    assert poly_eval(a * b, pt) == poly_eval(a, pt) * poly_eval(b, pt)
    assert poly_eval(a + b, pt) == poly_eval(a, pt) + poly_eval(b, pt)


@settings(max_examples=200)
@given(polys(), st.data())
def test_modp_evaluation_agrees_with_exact(p, data):
    pt = data.draw(rational_points(p.arity).map(lambda v: [int(c) for c in v]))
    exact = poly_eval(p, pt)
    want = exact.numerator * pow(exact.denominator, -1, MERSENNE_61) % MERSENNE_61
    assert poly_eval_modp(p, pt, MERSENNE_61) == want


@settings(max_examples=100)
@given(poly_pairs(2))
def test_exact_division(ab):
    a, b = ab
    if b.is_zero:
        return
    assert (a * b).exact_div(b) == a


# -- gcd --------------------------------------------------------------------------------------------


@settings(max_examples=150)
@given(poly_pairs(3, max_degree=3))
def test_gcd_matches_sympy(abc):
    a, b, c = abc
    n = a.arity
    f, g = (a * c)._c, (b * c)._c
    if not f or not g:
        return
    _, f = K.primitive(f)
    _, g = K.primitive(g)
    ours = SparsePoly._raw(n, K.gcd_poly(f, g, n))
    syms = sympy.symbols(f"v0:{n}")
    want = sympy.Poly(sympy.gcd(to_sympy(SparsePoly._raw(n, f)), to_sympy(SparsePoly._raw(n, g))), *syms)
    want_poly = from_sympy(want.as_expr(), n)
    # both are primitive up to sign
    assert ours == want_poly or ours == -want_poly


@contextmanager
def force_prs():
    old = K._use_heuristic
    K._use_heuristic = False
    try:
        yield
    finally:
        K._use_heuristic = old


@settings(max_examples=100)
@given(poly_pairs(3, max_degree=3))
def test_heuristic_and_prs_gcd_agree(abc):
    a, b, c = abc
    n = a.arity
    f, g = (a * c)._c, (b * c)._c
    if not f or not g:
        return
    _, f = K.primitive(f)
    _, g = K.primitive(g)
    fast = K.gcd_poly(f, g, n)
    with force_prs():
        slow = K.gcd_poly(f, g, n)
    assert fast == slow


# -- rational functions ---------------------------------------------------------------------------


def test_normalize_examples():
    assert rf_normalize(P("x^2 - y^2"), P("x - y")) == RationalFunction(P("x + y"))
    f = rf_normalize(P("2*x"), SparsePoly.constant(4, 2))
    assert (f.num, f.den) == (P("x"), SparsePoly.constant(2, 2))
    g = rf_normalize(P("x"), P("-y"))
    assert (g.num, g.den) == (P("-x"), P("y"))


def test_normalize_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        rf_normalize(P("x"), SparsePoly.zero(2))


def test_zero_is_unique():
    z = rf_normalize(SparsePoly.zero(2), P("x^2 + 3*y"))
    assert z.num.is_zero and z.den == SparsePoly.constant(1, 2)


def test_field_examples():
    assert rf_add(R("1/(x*(x+y))"), R("1/(y*(x+y))")) == R("1/(x*y)")
    assert rf_pow(R("x/y"), -1) == R("y/x")
    assert rf_mul(R("(x+1)/(y-3)"), RationalFunction.constant(0, 2)).is_zero
    with pytest.raises(ZeroDivisionError):
        rf_pow(RationalFunction.constant(0, 2), -1)


def test_derivative_examples():
    assert rf_partial_derivative(R("1/x"), 0) == R("-1/x^2")
    assert rf_partial_derivative(R("1/(x*(x+y))"), 0) == R("-(2*x + y)/(x^2*(x+y)^2)")
    assert rf_partial_derivative(R("1/x"), 1).is_zero


def test_quotient_rule_hand_oracle():
    # d/dx (u/v) = (u'v - uv')/v^2 computed by hand on polynomials
    u, v = P("x*y + 1"), P("x^2 - y")
    du, dv = u.derivative(0), v.derivative(0)
    assert rf_partial_derivative(RationalFunction(u, v), 0) == RationalFunction(du * v - u * dv, v * v)


def test_substitute_examples():
    inv_x = R("1/x")
    assert rf_substitute(R("1/(x*y)"), 0, inv_x) == R("x/y")
    assert rf_substitute(R("x + y"), 1, R("x/(x-1)")) == R("x^2/(x-1)")
    f = R("(x^2 + 3*y)/(x - y^3)")
    assert rf_substitute(f, 0, R("x")) == f


def test_substitute_pole():
    with pytest.raises(PoleError, match="substitution hits pole identically"):
        rf_substitute(R("1/(x - y)"), 0, R("y"))


def test_denominator_sign_is_canonical():
    f = R("1/(-x^2 + y)")
    assert f.den.leading_term()[1] > 0


@settings(max_examples=200)
@given(st.integers(1, 3).flatmap(rfs))
def test_normalization_idempotent(f):
    again = rf_normalize(f.num, f.den)
    assert again == f
    assert (again.num, again.den) == (f.num, f.den)


@settings(max_examples=100)
@given(st.integers(1, 3).flatmap(rfs))
def test_normal_form_matches_sympy_cancel(f):
    num, den = sympy.fraction(sympy.cancel(to_sympy(f)))
    # no common factor left on our side, and the same function as sympy's reduced form
    assert sympy.gcd(to_sympy(f.num), to_sympy(f.den)).free_symbols == set()
    assert sympy.expand(to_sympy(f.num) * den - num * to_sympy(f.den)) == 0


@settings(max_examples=200)
@given(st.integers(1, 3).flatmap(rfs))
def test_double_reciprocal(f):
    if f.is_zero:
        return
    assert rf_pow(rf_pow(f, -1), -1) == f


@settings(max_examples=200)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(rfs(n), rfs(n), st.integers(0, n - 1), rational_points(n))))
def test_substitution_evaluation_consistency(case):
    f, g, v, pt = case
    try:
        gv = g.evaluate(pt)
    except ZeroDivisionError:
        return
    moved = list(pt)
    moved[v] = gv
    try:
        want = f.evaluate(moved)
    except ZeroDivisionError:
        return
    try:
        h = rf_substitute(f, v, g)
    except PoleError:
        return
    try:
        got = h.evaluate(pt)
    except ZeroDivisionError:
        return  # removable singularity after cancellation
    assert got == want


@settings(max_examples=200)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(rfs(n), rfs(n), st.integers(0, n - 1))))
def test_rf_leibniz_rule(case):
    f, g, v = case
    assert rf_partial_derivative(f * g, v) == rf_partial_derivative(f, v) * g + f * rf_partial_derivative(g, v)


@settings(max_examples=100)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(rfs(n), rational_points(n))))
def test_variable_inversion_oracle(case):
    f, pt = case
    if any(c == 0 for c in pt):
        return
    try:
        want = f.evaluate([1 / c for c in pt])
        got = f.invert_variables().evaluate(pt)
    except ZeroDivisionError:
        return
    assert got == want
