"""Builders for the Chaundy-Bullard family of identities and the exact verifier.

Every builder returns an :class:`Identity` whose sides are flat tuples of
separately normalized terms, one per summand.  Alongside each term the
builder records its combinatorial coefficient and a LaTeX rendering that
keeps the binomials and powers visible.

Conditional identities (``gkp``, ``knuth3``, ``s2_one``) carry their
constraint polynomial and a rational parametrization of the constraint
variety that solves for one variable.  The exact verifier substitutes the
parametrization, which is sound because each constraint is irreducible and
linear in the solved variable.

A note on ``three_param``: the case ``m - r > 0`` reduces by reindexing to
the original identity plus ``ks27``.  The mirrored case ``k - l > 0`` is
expected by the ``x -> 1 - x`` symmetry, but here it is only verified
computationally, with no proof behind it.
"""

from __future__ import annotations

import itertools
import time
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .combinatorics import multinomial, rat_binomial
from .errors import ParameterError
from .poly import SparsePoly
from .ratfunc import RationalFunction, rf_sum
from .textfmt import default_names, format_poly, format_rf, latex_poly


@dataclass(frozen=True)
class TermInfo:
    coeff: Fraction
    latex: str


@dataclass(frozen=True)
class Identity:
    family: str
    params: tuple[int, ...]
    arity: int
    lhs_terms: tuple[RationalFunction, ...]
    rhs_terms: tuple[RationalFunction, ...]
    lhs_info: tuple[TermInfo, ...] = ()
    rhs_info: tuple[TermInfo, ...] = ()
    constraint: SparsePoly | None = None
    parametrization: tuple[int, RationalFunction] | None = None
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if (self.constraint is None) != (self.parametrization is None):
            raise ValueError("constraint and parametrization must be given together")
        for t in self.lhs_terms + self.rhs_terms:
            if t.arity != self.arity:
                raise ValueError(f"term of arity {t.arity} in identity of arity {self.arity}")
        if not self.names:
            object.__setattr__(self, "names", tuple(default_names(self.arity)))
        if self.parametrization is not None:
            var, g = self.parametrization
            if RationalFunction(self.constraint).substitute(var, g) != 0:
                raise ValueError("parametrization does not annihilate the constraint")

    @property
    def identity_id(self) -> str:
        return f"{self.family}({', '.join(map(str, self.params))})"

    @property
    def is_conditional(self) -> bool:
        return self.constraint is not None

    def plain(self) -> str:
        from .textfmt import format_sum

        out = f"{format_sum(self.lhs_terms, self.names)} = {format_sum(self.rhs_terms, self.names)}"
        if self.constraint is not None:
            out += f"  [on {format_poly(self.constraint, self.names)} = 0]"
        return out


@dataclass(frozen=True)
class VerificationReport:
    family: str
    params: tuple[int, ...]
    method: str
    verdict: str
    residual: RationalFunction | None = None
    trials: int | None = None
    seed: int | None = None
    elapsed: float = 0.0
    detail: str | None = None
    names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.method == "exact":
            if self.verdict == "fails" and self.detail is None and (self.residual is None or self.residual.is_zero):
                raise ValueError("failed exact report needs a nonzero residual")
            if self.verdict == "holds" and self.residual is not None:
                raise ValueError("holding exact report carries no residual")

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"

    def to_json(self) -> dict:
        names = self.names or default_names(self.residual.arity if self.residual else 1)
        return {
            "family": self.family,
            "params": list(self.params),
            "method": self.method,
            "verdict": self.verdict,
            "residual": None if self.residual is None else format_rf(self.residual, names),
            "trials": self.trials,
            "seed": self.seed,
            "elapsed_ms": round(self.elapsed * 1000.0, 3),
        }


# -- term construction ---------------------------------------------------------------


@lru_cache(maxsize=2048)
def _ppow(p: SparsePoly, e: int) -> SparsePoly:
    return p**e


@dataclass(frozen=True)
class _Factor:
    num: SparsePoly
    den: SparsePoly | None
    latex: str


def _var_factor(i: int, arity: int, names: Sequence[str]) -> _Factor:
    return _Factor(SparsePoly.variable(i, arity), None, names[i])


def _poly_factor(p: SparsePoly, names: Sequence[str]) -> _Factor:
    return _Factor(p, None, f"({latex_poly(p, names)})")


def _lx_power(f: _Factor, e: int) -> str:
    if e == 1:
        return f.latex
    return f"{f.latex}^{{{e}}}"


def _term(coeff: Fraction, coeff_latex: str, factors: Sequence[tuple[_Factor, int]], arity: int):
    """Build ``coeff * prod(base**e)`` as one normalized rational function plus its LaTeX."""
    num = SparsePoly.constant(coeff, arity)
    den = SparsePoly.constant(1, arity)
    top, bottom = [], []
    for f, e in factors:
        if e == 0:
            continue
        if e > 0:
            num = num * _ppow(f.num, e)
            if f.den is not None:
                den = den * _ppow(f.den, e)
            top.append(_lx_power(f, e))
        else:
            den = den * _ppow(f.num, -e)
            if f.den is not None:
                num = num * _ppow(f.den, -e)
            bottom.append(_lx_power(f, -e))
    body = " ".join(top)
    if bottom:
        body = f"\\frac{{{body or '1'}}}{{{' '.join(bottom)}}}"
    elif not body:
        body = "1" if not coeff_latex else ""
    latex = f"{coeff_latex} {body}".strip() if coeff_latex else body
    return RationalFunction(num, den), TermInfo(Fraction(coeff), latex)


def _binom_latex(n: int, r: int) -> str:
    return f"\\binom{{{n}}}{{{r}}}"


def _multinomial_latex(orders: Sequence[int]) -> str:
    bottom = "\\,".join(f"{k}!" for k in orders)
    return f"\\frac{{{sum(orders)}!}}{{{bottom}}}"


def _assemble(family, params, arity, lhs, rhs, names, constraint=None, parametrization=None) -> Identity:
    return Identity(
        family=family,
        params=tuple(params),
        arity=arity,
        lhs_terms=tuple(t for t, _ in lhs),
        rhs_terms=tuple(t for t, _ in rhs),
        lhs_info=tuple(i for _, i in lhs),
        rhs_info=tuple(i for _, i in rhs),
        constraint=constraint,
        parametrization=parametrization,
        names=tuple(names),
    )


def _one(arity: int):
    return _term(Fraction(1), "", [], arity)


def _check_nonneg(family: str, params: Sequence[int]) -> None:
    for p in params:
        if not isinstance(p, int) or p < 0:
            raise ParameterError(f"{family}: parameters must be non-negative integers, got {tuple(params)}")


def _check_orders(family: str, m: Sequence[int]) -> tuple[int, ...]:
    m = tuple(m)
    if len(m) < 2:
        raise ParameterError(f"{family}: needs at least 2 orders, got {len(m)}")
    _check_nonneg(family, m)
    return m


def _skip_ranges(m: Sequence[int], t: int):
    """All index vectors ``i`` with ``0 <= i_j <= m_j`` for ``j != t``; slot ``t`` holds ``m_t``."""
    ranges = [range(mj + 1) if j != t else (m[t],) for j, mj in enumerate(m)]
    return itertools.product(*ranges)


# -- one-variable families -----------------------------------------------------------------


def build_cb(k: int, m: int) -> Identity:
    """``x^{k+1} sum C(k+i,k)(1-x)^i + (1-x)^{m+1} sum C(m+i,m) x^i = 1``."""
    _check_nonneg("cb", (k, m))
    names = default_names(1)
    x = _var_factor(0, 1, names)
    omx = _poly_factor(1 - SparsePoly.variable(0, 1), names)
    lhs = []
    for i in range(m + 1):
        lhs.append(_term(rat_binomial(k + i, k), _binom_latex(k + i, k), [(x, k + 1), (omx, i)], 1))
    for i in range(k + 1):
        lhs.append(_term(rat_binomial(m + i, m), _binom_latex(m + i, m), [(omx, m + 1), (x, i)], 1))
    return _assemble("cb", (k, m), 1, lhs, [_one(1)], names)


def build_three_param(m: int, r: int, k: int, l: int) -> Identity:
    """Three-parameter extension; requires ``m - r + k - l == 0``.

    Summands whose binomial vanishes are omitted, which also removes every
    summand that would carry a negative power of ``x``.
    """
    _check_nonneg("three_param", (m, r, k, l))
    if m - r + k - l != 0:
        raise ParameterError(f"parameter constraint violated: m - r + k - l = {m - r + k - l} != 0")
    names = default_names(1)
    x = _var_factor(0, 1, names)
    omx = _poly_factor(1 - SparsePoly.variable(0, 1), names)
    lhs = []
    for i in range(k + 1):
        c = rat_binomial(m + i, r)
        if c:
            lhs.append(_term(c, _binom_latex(m + i, r), [(omx, r + 1), (x, i + m - r)], 1))
    for i in range(m + 1):
        c = rat_binomial(k + i, l)
        if c:
            lhs.append(_term(c, _binom_latex(k + i, l), [(x, l + 1), (omx, i + k - l)], 1))
    rhs = [_one(1)]
    if m - r > 0:
        for i in range(m - r):
            rhs.append(_term(-rat_binomial(m, i), "-" + _binom_latex(m, i), [(x, i), (omx, m - i)], 1))
    elif k - l > 0:
        for i in range(k - l):
            rhs.append(_term(-rat_binomial(k, i), "-" + _binom_latex(k, i), [(omx, i), (x, k - i)], 1))
    return _assemble("three_param", (m, r, k, l), 1, lhs, rhs, names)


def build_ks27(m: int, r: int) -> Identity:
    """``sum_{j<m-r} C(j+r,r) x^j = sum_{i<m-r} C(m,i) x^i (1-x)^{m-r-i-1}``."""
    _check_nonneg("ks27", (m, r))
    if m <= r:
        raise ParameterError(f"empty identity: ks27 needs m > r, got m={m}, r={r}")
    names = default_names(1)
    x = _var_factor(0, 1, names)
    omx = _poly_factor(1 - SparsePoly.variable(0, 1), names)
    lhs = [_term(rat_binomial(j + r, r), _binom_latex(j + r, r), [(x, j)], 1) for j in range(m - r)]
    rhs = [
        _term(rat_binomial(m, i), _binom_latex(m, i), [(x, i), (omx, m - r - i - 1)], 1)
        for i in range(m - r)
    ]
    return _assemble("ks27", (m, r), 1, lhs, rhs, names)


# -- two-variable families --------------------------------------------------------------------


def _xy_ratio(names) -> _Factor:
    x, y = SparsePoly.variable(0, 2), SparsePoly.variable(1, 2)
    return _Factor(x * y, x + y, f"\\left(\\frac{{{names[0]} {names[1]}}}{{{names[0]} + {names[1]}}}\\right)")


def build_homogeneous(k: int, m: int) -> Identity:
    """Homogeneous form in ``x, y``; RHS is ``x^{m+1} y^{k+1}``."""
    _check_nonneg("homogeneous", (k, m))
    names = default_names(2)
    x, y = _var_factor(0, 2, names), _var_factor(1, 2, names)
    q = _xy_ratio(names)
    lhs = []
    for i in range(m + 1):
        lhs.append(_term(rat_binomial(k + i, k), _binom_latex(k + i, k), [(x, m - i + 1), (q, k + i + 1)], 2))
    for i in range(k + 1):
        lhs.append(_term(rat_binomial(m + i, m), _binom_latex(m + i, m), [(y, k - i + 1), (q, m + i + 1)], 2))
    rhs = [_term(Fraction(1), "", [(x, m + 1), (y, k + 1)], 2)]
    return _assemble("homogeneous", (k, m), 2, lhs, rhs, names)


def build_gkp(k: int, m: int) -> Identity:
    """``x^{m+1} y^{k+1} = sum C(k+i,k) x^{m-i+1} + sum C(m+i,m) y^{k-i+1}`` on ``xy = x + y``."""
    _check_nonneg("gkp", (k, m))
    names = default_names(2)
    x, y = _var_factor(0, 2, names), _var_factor(1, 2, names)
    lhs = [_term(Fraction(1), "", [(x, m + 1), (y, k + 1)], 2)]
    rhs = []
    for i in range(m + 1):
        rhs.append(_term(rat_binomial(k + i, k), _binom_latex(k + i, k), [(x, m - i + 1)], 2))
    for i in range(k + 1):
        rhs.append(_term(rat_binomial(m + i, m), _binom_latex(m + i, m), [(y, k - i + 1)], 2))
    X, Y = SparsePoly.variable(0, 2), SparsePoly.variable(1, 2)
    constraint = X * Y - X - Y
    solve_y = RationalFunction(X, X - 1)
    return _assemble("gkp", (k, m), 2, lhs, rhs, names, constraint, (1, solve_y))


# -- n-variable families ------------------------------------------------------------------------


def _sym_sum(n: int) -> SparsePoly:
    return sum((SparsePoly.variable(i, n) for i in range(n)), SparsePoly.zero(n))


def _sym_prod(n: int) -> SparsePoly:
    return SparsePoly.monomial((1,) * n)


def _sym_skip(n: int) -> SparsePoly:
    """Elementary symmetric polynomial of degree ``n - 1``."""
    out = SparsePoly.zero(n)
    for t in range(n):
        out = out + SparsePoly.monomial(tuple(0 if j == t else 1 for j in range(n)))
    return out


def _sum_latex(names) -> str:
    return "(" + " + ".join(names) + ")"


def build_base_n(n: int) -> Identity:
    """``1/(x_1...x_n) = sum_t 1/(prod_{j != t} x_j * (x_1 + ... + x_n))``."""
    if not isinstance(n, int) or n < 2:
        raise ParameterError(f"base_n needs n >= 2, got {n}")
    names = default_names(n)
    xs = [_var_factor(i, n, names) for i in range(n)]
    s = _Factor(_sym_sum(n), None, _sum_latex(names))
    lhs = [_term(Fraction(1), "", [(xi, -1) for xi in xs], n)]
    rhs = []
    for t in range(n):
        rhs.append(_term(Fraction(1), "", [(xs[j], -1) for j in range(n) if j != t] + [(s, -1)], n))
    return _assemble("base_n", (n,), n, lhs, rhs, names)


def build_inverse_n(m: Sequence[int]) -> Identity:
    """``1/prod x_t^{m_t+1}`` expanded over the skipped-variable sums, factorials divided out."""
    m = _check_orders("inverse_n", m)
    n = len(m)
    names = default_names(n)
    xs = [_var_factor(i, n, names) for i in range(n)]
    s = _Factor(_sym_sum(n), None, _sum_latex(names))
    lhs = [_term(Fraction(1), "", [(xs[j], -(m[j] + 1)) for j in range(n)], n)]
    rhs = []
    for t in range(n):
        for idx in _skip_ranges(m, t):
            factors = [(xs[j], -(m[j] - idx[j] + 1)) for j in range(n) if j != t]
            factors.append((s, -(sum(idx) + 1)))
            rhs.append(_term(multinomial(idx), _multinomial_latex(idx), factors, n))
    return _assemble("inverse_n", m, n, lhs, rhs, names)


def build_n_powers(m: Sequence[int]) -> Identity:
    """Main homogeneous identity: the skipped-variable double sum equals ``prod x_t^{m_t+1}``."""
    m = _check_orders("n_powers", m)
    n = len(m)
    names = default_names(n)
    xs = [_var_factor(i, n, names) for i in range(n)]
    ratio = _Factor(
        _sym_prod(n),
        _sym_skip(n),
        f"\\left(\\frac{{{latex_poly(_sym_prod(n), names)}}}{{{latex_poly(_sym_skip(n), names)}}}\\right)",
    )
    lhs = []
    for t in range(n):
        for idx in _skip_ranges(m, t):
            factors = [(xs[j], m[j] - idx[j] + 1) for j in range(n) if j != t]
            factors.append((ratio, sum(idx) + 1))
            lhs.append(_term(multinomial(idx), _multinomial_latex(idx), factors, n))
    rhs = [_term(Fraction(1), "", [(xs[j], m[j] + 1) for j in range(n)], n)]
    return _assemble("n_powers", m, n, lhs, rhs, names)


def build_knuth3(m1: int, m2: int, m3: int) -> Identity:
    """Three-variable conditional identity on ``xyz = xy + yz + zx``."""
    m = (m1, m2, m3)
    _check_nonneg("knuth3", m)
    names = default_names(3)
    xs = [_var_factor(i, 3, names) for i in range(3)]
    lhs = [_term(Fraction(1), "", [(xs[j], m[j] + 1) for j in range(3)], 3)]
    rhs = []
    for t in range(3):
        for idx in _skip_ranges(m, t):
            factors = [(xs[j], m[j] - idx[j] + 1) for j in range(3) if j != t]
            rhs.append(_term(multinomial(idx), _multinomial_latex(idx), factors, 3))
    X, Y, Z = (SparsePoly.variable(i, 3) for i in range(3))
    constraint = X * Y * Z - X * Y - Y * Z - Z * X
    solve_z = RationalFunction(X * Y, X * Y - X - Y)
    return _assemble("knuth3", m, 3, lhs, rhs, names, constraint, (2, solve_z))


def build_s2_one(m1: int, m2: int, m3: int) -> Identity:
    """Three-variable analogue of the original identity on ``xy + yz + zx = 1``."""
    m = (m1, m2, m3)
    _check_nonneg("s2_one", m)
    names = default_names(3)
    x, y, z = (_var_factor(i, 3, names) for i in range(3))
    X, Y, Z = (SparsePoly.variable(i, 3) for i in range(3))
    yz = _Factor(Y * Z, None, f"({names[1]} {names[2]})")
    zx = _Factor(Z * X, None, f"({names[2]} {names[0]})")
    xy = _Factor(X * Y, None, f"({names[0]} {names[1]})")
    lhs = []
    for j in range(m2 + 1):
        for k in range(m3 + 1):
            orders = (m1, j, k)
            lhs.append(_term(multinomial(orders), _multinomial_latex(orders),
                             [(yz, m1 + 1), (y, k), (z, j), (x, j + k)], 3))
    for k in range(m3 + 1):
        for i in range(m1 + 1):
            orders = (i, m2, k)
            lhs.append(_term(multinomial(orders), _multinomial_latex(orders),
                             [(zx, m2 + 1), (z, i), (x, k), (y, i + k)], 3))
    for i in range(m1 + 1):
        for j in range(m2 + 1):
            orders = (i, j, m3)
            lhs.append(_term(multinomial(orders), _multinomial_latex(orders),
                             [(xy, m3 + 1), (x, j), (y, i), (z, i + j)], 3))
    constraint = X * Y + Y * Z + Z * X - 1
    solve_z = RationalFunction(1 - X * Y, X + Y)
    return _assemble("s2_one", m, 3, lhs, [_one(3)], names, constraint, (2, solve_z))


def build_transformed(m: Sequence[int]) -> Identity:
    """Polynomial identity in ``u_1..u_n``; RHS is ``(u_1 + ... + u_n)^{sum m + 1}``."""
    m = _check_orders("transformed", m)
    n = len(m)
    names = default_names(n, prefix="u")
    us = [_var_factor(i, n, names) for i in range(n)]
    s = _Factor(_sym_sum(n), None, _sum_latex(names))
    lhs = []
    for t in range(n):
        for idx in _skip_ranges(m, t):
            factors = [(us[t], m[t] + 1)]
            factors += [(us[j], idx[j]) for j in range(n) if j != t]
            factors.append((s, sum(m[j] - idx[j] for j in range(n) if j != t)))
            lhs.append(_term(multinomial(idx), _multinomial_latex(idx), factors, n))
    rhs = [_term(Fraction(1), "", [(s, sum(m) + 1)], n)]
    return _assemble("transformed", m, n, lhs, rhs, names)


# -- registry ---------------------------------------------------------------------------------------


@dataclass(frozen=True)
class Family:
    name: str
    builder: Callable[..., Identity]
    nparams: int | None  # None: a vector of at least two orders
    summary: str

    def build(self, params: Sequence[int]) -> Identity:
        params = tuple(params)
        if self.nparams is None:
            return self.builder(params)
        if len(params) != self.nparams:
            raise ParameterError(f"{self.name} takes {self.nparams} parameters, got {len(params)}")
        return self.builder(*params)


FAMILIES: dict[str, Family] = {
    f.name: f
    for f in (
        Family("cb", build_cb, 2, "k m: the original two-sum identity in x"),
        Family("homogeneous", build_homogeneous, 2, "k m: homogeneous form in x, y"),
        Family("gkp", build_gkp, 2, "k m: conditional form on xy = x + y"),
        Family("base_n", build_base_n, 1, "n: partial fractions of 1/(x1...xn)"),
        Family("inverse_n", build_inverse_n, None, "m1 .. mn: inverse-power identity"),
        Family("n_powers", build_n_powers, None, "m1 .. mn: main homogeneous identity"),
        Family("knuth3", build_knuth3, 3, "m1 m2 m3: conditional form on xyz = xy + yz + zx"),
        Family("s2_one", build_s2_one, 3, "m1 m2 m3: conditional form on xy + yz + zx = 1"),
        Family("transformed", build_transformed, None, "m1 .. mn: polynomial identity in u1..un"),
        Family("three_param", build_three_param, 4, "m r k l with m - r + k - l = 0"),
        Family("ks27", build_ks27, 2, "m r with m > r: auxiliary binomial identity"),
    )
}


def build(family: str, params: Sequence[int]) -> Identity:
    try:
        fam = FAMILIES[family]
    except KeyError:
        raise ParameterError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}") from None
    return fam.build(params)


# -- comparison and mutation ---------------------------------------------------------------------


def term_multiset(terms: Sequence[RationalFunction]) -> Counter:
    return Counter(terms)


def same_terms(a: Identity, b: Identity, allow_swap: bool = False) -> bool:
    """Multiset equality of both sides, optionally with sides exchanged."""
    la, ra = term_multiset(a.lhs_terms), term_multiset(a.rhs_terms)
    lb, rb = term_multiset(b.lhs_terms), term_multiset(b.rhs_terms)
    if la == lb and ra == rb:
        return True
    return allow_swap and la == rb and ra == lb


def mutate(identity: Identity, side: str, index: int, delta: int = 1) -> Identity:
    """Bump the combinatorial coefficient of one term by ``delta``."""
    terms = list(getattr(identity, f"{side}_terms"))
    info = list(getattr(identity, f"{side}_info"))
    c = info[index].coeff
    terms[index] = terms[index] * ((c + delta) / c)
    info[index] = TermInfo(c + delta, f"[{c + delta}] {info[index].latex}")
    return replace(identity, **{f"{side}_terms": tuple(terms), f"{side}_info": tuple(info)})


# -- exact verification ---------------------------------------------------------------------------


def difference(identity: Identity) -> RationalFunction:
    """``sum(lhs) - sum(rhs)``, after applying the parametrization if any."""
    lhs, rhs = identity.lhs_terms, identity.rhs_terms
    if identity.parametrization is not None:
        var, g = identity.parametrization
        lhs = [t.substitute(var, g) for t in lhs]
        rhs = [t.substitute(var, g) for t in rhs]
    terms = list(lhs) + [-t for t in rhs]
    if not terms:
        return RationalFunction.constant(0, identity.arity)
    return rf_sum(terms)


def verify_exact(identity: Identity) -> VerificationReport:
    start = time.perf_counter()
    diff = difference(identity)
    elapsed = time.perf_counter() - start
    return VerificationReport(
        family=identity.family,
        params=identity.params,
        method="exact",
        verdict="holds" if diff.is_zero else "fails",
        residual=None if diff.is_zero else diff,
        elapsed=elapsed,
        names=identity.names,
    )
