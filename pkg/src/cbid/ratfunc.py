"""Rational functions in canonical form.

A :class:`RationalFunction` is stored as ``num / den`` where both are
integer-coefficient polynomials with no common polynomial factor, the
integer contents of ``num`` and ``den`` are coprime, and the lexicographically
leading coefficient of ``den`` is positive.  Zero is ``0 / 1``.  Every value
produced by this module is in that form, so ``==`` and ``hash`` are
structural.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Iterable, Sequence

from . import _kernel as K
from .errors import ArityError, PoleError
from .poly import SparsePoly, _as_fraction


class RationalFunction:
    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: SparsePoly, den: SparsePoly | None = None):
        if den is None:
            den = SparsePoly.constant(1, num.arity)
        n, d = _normalize(num, den)
        object.__setattr__(self, "num", n)
        object.__setattr__(self, "den", d)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _make(cls, num: SparsePoly, den: SparsePoly) -> "RationalFunction":
        f = cls.__new__(cls)
        object.__setattr__(f, "num", num)
        object.__setattr__(f, "den", den)
        object.__setattr__(f, "_hash", None)
        return f

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    def __reduce__(self):
        return (RationalFunction._make, (self.num, self.den))

    # -- constructors ----------------------------------------------------------

    @classmethod
    def from_poly(cls, p: SparsePoly) -> "RationalFunction":
        return cls(p)

    @classmethod
    def constant(cls, c, arity: int) -> "RationalFunction":
        f = _as_fraction(c)
        return cls._make(
            SparsePoly.constant(f.numerator, arity), SparsePoly.constant(f.denominator, arity)
        )

    @classmethod
    def variable(cls, i: int, arity: int) -> "RationalFunction":
        return cls._make(SparsePoly.variable(i, arity), SparsePoly.constant(1, arity))

    # -- inspection --------------------------------------------------------------

    @property
    def arity(self) -> int:
        return self.num.arity

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.den.is_constant

    def as_poly(self) -> SparsePoly:
        if not self.is_polynomial:
            raise ValueError("rational function is not a polynomial")
        return self.num / self.den.constant_value()

    # -- field operations ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.arity != self.arity:
                raise ArityError(f"arity mismatch: {self.arity} vs {other.arity}")
            return other
        if isinstance(other, SparsePoly):
            if other.arity != self.arity:
                raise ArityError(f"arity mismatch: {self.arity} vs {other.arity}")
            return RationalFunction(other)
        if isinstance(other, (int, Rational)):
            return RationalFunction.constant(other, self.arity)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero:
            return self
        if self.is_zero:
            return o
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return rf_sum((self, o))

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction._make(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.is_zero or o.is_zero:
            return RationalFunction.constant(0, self.arity)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def reciprocal(self) -> "RationalFunction":
        if self.is_zero:
            raise ZeroDivisionError("reciprocal of the zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.reciprocal()

    def __pow__(self, e: int) -> "RationalFunction":
        if not isinstance(e, int):
            raise TypeError(f"exponent must be an int, got {e!r}")
        if e < 0:
            return self.reciprocal() ** (-e)
        # powers of coprime polynomials stay coprime; only the sign needs fixing
        num, den = self.num**e, self.den**e
        return RationalFunction._make(num, den)

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (SparsePoly, int, Rational)):
            o = self._coerce(other)
            return self == o
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.num, self.den)))
        return self._hash

    # -- calculus, substitution, evaluation -------------------------------------

    def derivative(self, var: int) -> "RationalFunction":
        """Partial derivative by the quotient rule, normalized."""
        self.num._check_var(var)
        dn = self.num.derivative(var)
        if self.den.is_constant:
            return RationalFunction(dn, self.den)
        dd = self.den.derivative(var)
        if dd.is_zero:
            return RationalFunction(dn, self.den)
        # den = g*d1 and den' = g*e1 give (num'*d1 - num*e1) / (den*d1)
        g = SparsePoly._raw(self.arity, K.gcd_poly(self.den._c, dd._c, self.arity))
        d1 = self.den.exact_div(g)
        e1 = dd.exact_div(g)
        return RationalFunction(dn * d1 - self.num * e1, self.den * d1)

    def substitute(self, var: int, g: "RationalFunction") -> "RationalFunction":
        """Replace variable ``var`` by ``g`` (same ring), clearing denominators."""
        self.num._check_var(var)
        g = self._coerce(g)
        dn = max(self.num.degree(var), 0)
        dd = max(self.den.degree(var), 0)
        top = max(dn, dd)
        a_pows = _powers(g.num, top)
        b_pows = _powers(g.den, top)
        num = _compose(self.num, var, a_pows, b_pows, dn)
        den = _compose(self.den, var, a_pows, b_pows, dd)
        if den.is_zero:
            raise PoleError("substitution hits pole identically")
        if dd > dn:
            num = num * b_pows[dd - dn]
        elif dn > dd:
            den = den * b_pows[dn - dd]
        return RationalFunction(num, den)

    def evaluate(self, point: Sequence) -> Fraction:
        d = self.den.evaluate(point)
        if not d:
            raise ZeroDivisionError(f"denominator vanishes at {tuple(point)}")
        return self.num.evaluate(point) / d

    def evaluate_mod(self, point: Sequence[int], prime: int) -> tuple[int, int]:
        """``(num, den)`` residues at ``point``; the caller decides what a zero denominator means."""
        return self.num.evaluate_mod(point, prime), self.den.evaluate_mod(point, prime)

    def invert_variables(self) -> "RationalFunction":
        """Substitute ``x_i -> 1/x_i`` for every variable at once."""
        num, dn = self.num.reflect()
        den, dd = self.den.reflect()
        up = [max(b - a, 0) for a, b in zip(dn, dd)]
        down = [max(a - b, 0) for a, b in zip(dn, dd)]
        if any(up):
            num = num * SparsePoly.monomial(up)
        if any(down):
            den = den * SparsePoly.monomial(down)
        if den.is_zero:
            raise PoleError("substitution hits pole identically")
        return RationalFunction(num, den)

    def extend(self, arity: int) -> "RationalFunction":
        return RationalFunction._make(self.num.extend(arity), self.den.extend(arity))

    def __repr__(self) -> str:
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def __str__(self) -> str:
        from .textfmt import format_rf

        return format_rf(self)


# -- helpers --------------------------------------------------------------------


def _normalize(num: SparsePoly, den: SparsePoly) -> tuple[SparsePoly, SparsePoly]:
    if num.arity != den.arity:
        raise ArityError(f"arity mismatch: {num.arity} vs {den.arity}")
    n = num.arity
    if den.is_zero:
        raise ZeroDivisionError("rational function with zero denominator")
    if num.is_zero:
        return SparsePoly.zero(n), SparsePoly.constant(1, n)
    nc, dc = num._c, den._c
    if not den.is_constant and not num.is_constant:
        g = K.gcd_poly(nc, dc, n)
        if len(g) > 1 or 0 not in g:
            nc = K.divexact(nc, g, n)
            dc = K.divexact(dc, g, n)
    # num/den = (nc / num._d) / (dc / den._d)
    nc = K.scale(nc, den._d)
    dc = K.scale(dc, num._d)
    c = gcd(K.content(nc), K.content(dc))
    if dc[max(dc)] < 0:
        c = -c
    nc = K.exquo_ground(nc, c)
    dc = K.exquo_ground(dc, c)
    return SparsePoly._raw(n, nc), SparsePoly._raw(n, dc)


def _powers(p: SparsePoly, top: int) -> list[SparsePoly]:
    out = [SparsePoly.constant(1, p.arity)]
    for _ in range(top):
        out.append(out[-1] * p)
    return out


def _compose(p: SparsePoly, var: int, a_pows, b_pows, d: int) -> SparsePoly:
    """``sum_k p_k * a**k * b**(d-k)`` where ``p = sum_k p_k * x_var**k``."""
    n = p.arity
    s = K.var_shift(var, n)
    parts: dict = defaultdict(dict)
    for k, c in p._c.items():
        e = (k >> s) & K.FIELD
        parts[e][k - (e << s)] = c
    out = SparsePoly.zero(n)
    for e, coeffs in parts.items():
        out = out + SparsePoly._raw(n, coeffs, p._d) * a_pows[e] * b_pows[d - e]
    return out


def rf_sum(terms: Iterable[RationalFunction]) -> RationalFunction:
    """Sum many rational functions over one least common denominator.

    Each denominator is split as ``c * x^a * p`` (integer, monomial,
    primitive part without monomial factors).  Terms are pooled by ``p`` with
    their numerators brought over the largest monomial seen; the common
    multiple of the ``p`` parts is grown by divisibility checks before
    falling back to a gcd.  Both steps are cheap for sums whose denominators
    are monomials times powers of one polynomial.
    """
    terms = list(terms)
    if not terms:
        raise ValueError("rf_sum of an empty sequence needs an arity; use RationalFunction.constant(0, n)")
    n = terms[0].arity
    split = []
    mono_lcm = [0] * n
    for t in terms:
        if t.arity != n:
            raise ArityError(f"arity mismatch: {n} vs {t.arity}")
        if t.is_zero:
            continue
        c, p = K.primitive(t.den._c)
        mk = K.monomial_content(p, n)
        if mk:
            p = K.shift(p, -mk)
        exps = K.unpack(mk, n)
        mono_lcm = [max(a, b) for a, b in zip(mono_lcm, exps)]
        split.append((t.num / c, exps, p))
    if not split:
        return RationalFunction.constant(0, n)
    top = K.pack(mono_lcm, n)
    pooled: dict = {}
    for num, exps, p in split:
        # num / (x^exps * p) == num * x^(top - exps) / (x^top * p)
        lifted = SparsePoly._raw(n, K.shift(num._c, top - K.pack(exps, n)), num._d)
        key = frozenset(p.items())
        slot = pooled.get(key)
        if slot is None:
            pooled[key] = [p, lifted]
        else:
            slot[1] = slot[1] + lifted
    groups = sorted(pooled.values(), key=lambda s: -len(s[0]))
    lcm = groups[0][0]
    for p, _ in groups[1:]:
        if K.divides(p, lcm, n):
            continue
        if K.divides(lcm, p, n):
            lcm = p
            continue
        g = K.gcd_poly(lcm, p, n)
        lcm = K.mul(lcm, K.divexact(p, g, n), n)
    total = SparsePoly.zero(n)
    for p, num in groups:
        cof = K.divexact(lcm, p, n)
        total = total + num * SparsePoly._raw(n, cof)
    if total.is_zero:
        return RationalFunction.constant(0, n)
    return RationalFunction(total, SparsePoly._raw(n, K.shift(lcm, top)))


# Functional aliases mirroring the operation names used in the docs.


def rf_normalize(num: SparsePoly, den: SparsePoly) -> RationalFunction:
    return RationalFunction(num, den)


def rf_add(a: RationalFunction, b: RationalFunction) -> RationalFunction:
    return a + b


def rf_mul(a: RationalFunction, b: RationalFunction) -> RationalFunction:
    return a * b


def rf_neg(a: RationalFunction) -> RationalFunction:
    return -a


def rf_pow(a: RationalFunction, e: int) -> RationalFunction:
    return a**e


def rf_partial_derivative(f: RationalFunction, var: int) -> RationalFunction:
    return f.derivative(var)


def rf_substitute(f: RationalFunction, var: int, g: RationalFunction) -> RationalFunction:
    return f.substitute(var, g)
