from fractions import Fraction

import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from cbid.poly import SparsePoly
from cbid.ratfunc import RationalFunction

settings.register_profile(
    "cbid",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("cbid")

SYMS = sympy.symbols("v0:6")

small_fractions = st.fractions(min_value=-6, max_value=6, max_denominator=4)
nonzero_fractions = small_fractions.filter(bool)


def exponent_vectors(arity, max_degree=4):
    return st.lists(st.integers(0, max_degree), min_size=arity, max_size=arity).filter(
        lambda e: sum(e) <= max_degree
    ).map(tuple)


@st.composite
def polys(draw, arity=None, max_degree=4, max_terms=5):
    n = arity if arity is not None else draw(st.integers(1, 3))
    terms = draw(st.dictionaries(exponent_vectors(n, max_degree), small_fractions, max_size=max_terms))
    return SparsePoly(n, terms)


@st.composite
def poly_pairs(draw, count=2, max_degree=4):
    n = draw(st.integers(1, 3))
    return tuple(draw(polys(n, max_degree)) for _ in range(count))


@st.composite
def rfs(draw, arity, max_degree=3, max_terms=3):
    num = draw(polys(arity, max_degree, max_terms))
    den = draw(polys(arity, max_degree, max_terms).filter(lambda p: not p.is_zero))
    return RationalFunction(num, den)


def rational_points(arity):
    return st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=7), min_size=arity, max_size=arity)


def to_sympy(p, syms=SYMS):
    """Independent view of a polynomial or rational function as a sympy expression."""
    if isinstance(p, RationalFunction):
        return to_sympy(p.num, syms) / to_sympy(p.den, syms)
    out = sympy.Integer(0)
    for exps, c in p.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, exps):
            term *= s**e
        out += term
    return out


def from_sympy(expr, arity, syms=SYMS):
    """Sympy polynomial back to a SparsePoly (the oracle's answer in our representation)."""
    poly = sympy.Poly(sympy.expand(expr), *syms[:arity])
    return SparsePoly(arity, {m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()})


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
