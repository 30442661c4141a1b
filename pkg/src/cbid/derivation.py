"""Mechanized differential-operator derivation.

Applies ``prod_t (-d/dx_t)^{m_t}`` to the partial-fraction identity for
``1/(x_1...x_n)``.  Each right-hand term is kept as a product of factors
(``1/x_j`` for the kept variables and a power of ``1/(x_1+...+x_n)``) and
differentiated with the general Leibniz rule, so the output is the flat
double sum rather than one collapsed rational function.  The result is then
compared term-by-term against the closed form built by
:func:`cbid.identities.build_inverse_n`, and inverting every variable maps
it onto :func:`cbid.identities.build_n_powers`.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .combinatorics import factorial_product, multinomial
from .errors import ArityError, ParameterError
from .identities import (
    Identity,
    TermInfo,
    VerificationReport,
    build_base_n,
    build_inverse_n,
    build_n_powers,
    difference,
    same_terms,
)
from . import _kernel as K
from .poly import SparsePoly
from .ratfunc import RationalFunction
from .textfmt import format_rf, latex_rf

OperatorOrders = tuple  # tuple[int, ...], one order per variable


def apply_operator(f: RationalFunction, orders: Sequence[int]) -> RationalFunction:
    """``prod_t (-d/dx_t)^{orders_t} f``, lowest variable index first."""
    if len(orders) != f.arity:
        raise ArityError(f"{len(orders)} orders for a function of arity {f.arity}")
    for v, k in enumerate(orders):
        if k < 0:
            raise ValueError(f"operator orders must be non-negative, got {tuple(orders)}")
        for _ in range(k):
            f = f.derivative(v)
    return -f if sum(orders) % 2 else f


@lru_cache(maxsize=4096)
def _single(f: RationalFunction, var: int, k: int) -> RationalFunction:
    orders = [0] * f.arity
    orders[var] = k
    return apply_operator(f, orders)


def _depends_on(f: RationalFunction, var: int) -> bool:
    return f.num.degree(var) > 0 or f.den.degree(var) > 0


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def leibniz_expand(factors: Sequence[RationalFunction], orders: Sequence[int]) -> list[tuple[Fraction, tuple]]:
    """Apply the operator to ``prod(factors)`` by the general Leibniz rule.

    Returns ``(coefficient, factors)`` products whose sum is the derivative.
    Factors independent of a variable are constants for that derivative and
    never receive any of its order.
    """
    current = [(Fraction(1), tuple(factors))]
    for v, k in enumerate(orders):
        if not k:
            continue
        nxt = []
        for coef, fs in current:
            dep = [i for i, f in enumerate(fs) if _depends_on(f, v)]
            if not dep:
                continue  # derivative of a constant
            for split in _compositions(k, len(dep)):
                new = list(fs)
                for i, a in zip(dep, split):
                    if a:
                        new[i] = _single(fs[i], v, a)
                if any(f.is_zero for f in new):
                    continue
                nxt.append((coef * multinomial(split), tuple(new)))
        current = nxt
    return current


def _product(fs: Sequence[RationalFunction]) -> RationalFunction:
    out = fs[0]
    for f in fs[1:]:
        out = out * f
    return out


def _split_term(term: RationalFunction) -> list[RationalFunction]:
    """Peel the monomial part off a term's denominator: ``1/(x_j ... * S)`` -> ``[1/x_j ..., 1/S]``."""
    n = term.arity
    exps = K.unpack(K.monomial_content(term.den._c, n), n)
    rest = term.den.exact_div(SparsePoly.monomial(exps))
    factors = [RationalFunction.variable(j, n) ** -e for j, e in enumerate(exps) if e]
    factors.append(RationalFunction(term.num, rest))
    assert _product(factors) == term
    return factors


def derive_inverse_identity(m: Sequence[int]) -> tuple[Identity, VerificationReport]:
    """Differentiate the base identity and compare with the closed-form inverse-power identity."""
    m = tuple(m)
    if len(m) < 2:
        raise ParameterError(f"derivation needs at least 2 orders, got {len(m)}")
    if any(k < 0 for k in m):
        raise ParameterError(f"operator orders must be non-negative, got {m}")
    start = time.perf_counter()
    n = len(m)
    base = build_base_n(n)
    scale = Fraction(1, factorial_product(m))

    lhs = [apply_operator(t, m) * scale for t in base.lhs_terms]
    rhs_terms, rhs_info = [], []
    for term in base.rhs_terms:
        for coef, fs in leibniz_expand(_split_term(term), m):
            value = _product(fs) * (coef * scale)
            rhs_terms.append(value)
            rhs_info.append(TermInfo(coef * scale, latex_rf(value, base.names)))
    derived = Identity(
        family="inverse_n",
        params=m,
        arity=n,
        lhs_terms=tuple(lhs),
        rhs_terms=tuple(rhs_terms),
        lhs_info=tuple(TermInfo(Fraction(1), latex_rf(t, base.names)) for t in lhs),
        rhs_info=tuple(rhs_info),
        names=base.names,
    )

    diff = difference(derived)
    closed = build_inverse_n(m)
    detail = None
    if diff.is_zero:
        detail = _first_mismatch(derived, closed)
    verdict = "holds" if diff.is_zero and detail is None else "fails"
    report = VerificationReport(
        family="inverse_n",
        params=m,
        method="exact",
        verdict=verdict,
        residual=None if diff.is_zero else diff,
        elapsed=time.perf_counter() - start,
        detail=detail,
        names=base.names,
    )
    return derived, report


def _first_mismatch(a: Identity, b: Identity, swap: bool = False) -> str | None:
    """Describe the first term in one multiset but not the other, or ``None`` when they agree."""
    pairs = [(a.lhs_terms, b.rhs_terms if swap else b.lhs_terms, "lhs"),
             (a.rhs_terms, b.lhs_terms if swap else b.rhs_terms, "rhs")]
    for mine, theirs, side in pairs:
        ca, cb = Counter(mine), Counter(theirs)
        if ca == cb:
            continue
        extra = ca - cb
        missing = cb - ca
        if extra:
            t = next(iter(extra))
            return f"{side}: derived term {format_rf(t, a.names)} has no closed-form counterpart"
        t = next(iter(missing))
        return f"{side}: closed-form term {format_rf(t, a.names)} not produced by derivation"
    return None


_INVERTED_FAMILY = {"inverse_n": "n_powers", "n_powers": "inverse_n"}


def invert_variables(identity: Identity) -> Identity:
    """Replace every ``x_i`` by ``1/x_i`` in every term."""
    if identity.constraint is not None:
        raise ValueError("cannot invert the variables of a conditional identity")
    lhs = tuple(t.invert_variables() for t in identity.lhs_terms)
    rhs = tuple(t.invert_variables() for t in identity.rhs_terms)
    return replace(
        identity,
        family=_INVERTED_FAMILY.get(identity.family, identity.family),
        lhs_terms=lhs,
        rhs_terms=rhs,
        lhs_info=tuple(TermInfo(i.coeff, latex_rf(t, identity.names)) for i, t in zip(identity.lhs_info, lhs)),
        rhs_info=tuple(TermInfo(i.coeff, latex_rf(t, identity.names)) for i, t in zip(identity.rhs_info, rhs)),
    )


@dataclass(frozen=True)
class DerivationCheck:
    orders: tuple[int, ...]
    derived: Identity
    report: VerificationReport
    matches_inverse: bool
    matches_n_powers: bool
    mismatch: str | None

    @property
    def ok(self) -> bool:
        return self.report.holds and self.matches_inverse and self.matches_n_powers


def check_derivation(m: Sequence[int]) -> DerivationCheck:
    """Run the derivation, then compare both stages against the closed-form builders."""
    m = tuple(m)
    derived, report = derive_inverse_identity(m)
    matches_inverse = same_terms(derived, build_inverse_n(m))
    inverted = invert_variables(derived)
    powers = build_n_powers(m)
    # inversion sends 1/prod x^(m+1) to prod x^(m+1), so the sides trade places
    matches_powers = same_terms(inverted, powers, allow_swap=True)
    mismatch = report.detail
    if mismatch is None and not matches_powers:
        mismatch = _first_mismatch(inverted, powers, swap=True)
    return DerivationCheck(m, derived, report, matches_inverse, matches_powers, mismatch)
