"""Sparse multivariate polynomials with exact rational coefficients.

Coefficients are stored as integer numerators over one shared positive
denominator, which keeps the inner loops in machine-friendly ``int``
arithmetic.  Exponent vectors are packed into single integers (see
:mod:`cbid._kernel`); the public surface speaks tuples and ``Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Iterator, Mapping, Sequence

from . import _kernel as K
from .errors import ArityError, BadPrimeError

Exponents = tuple  # tuple[int, ...], one entry per variable


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"coefficient must be rational, got {type(c).__name__}")


class SparsePoly:
    """Immutable polynomial over Q in ``arity`` variables.

    Terms iterate in descending lexicographic order of exponent vectors with
    variable 0 most significant, so the first term is the leading term.
    """

    __slots__ = ("arity", "_c", "_d", "_hash", "_modp")

    def __init__(self, arity: int, terms: Mapping[Sequence[int], object] | None = None):
        if arity < 0:
            raise ArityError(f"arity must be non-negative, got {arity}")
        packed: dict = {}
        den = 1
        if terms:
            fracs = {}
            for exps, c in terms.items():
                if len(exps) != arity:
                    raise ArityError(f"exponent vector {tuple(exps)} does not have length {arity}")
                f = _as_fraction(c)
                if f:
                    k = K.pack(exps, arity)
                    fracs[k] = fracs.get(k, 0) + f
                    den = den * f.denominator // gcd(den, f.denominator)
            packed = {k: int(f * den) for k, f in fracs.items() if f}
        self._init(arity, packed, den)

    def _init(self, arity: int, c: dict, d: int) -> None:
        if not c:
            d = 1
        elif d != 1:
            g = gcd(K.content(c), d)
            if g != 1:
                c = K.exquo_ground(c, g)
                d //= g
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "_c", c)
        object.__setattr__(self, "_d", d)
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_modp", None)

    @classmethod
    def _raw(cls, arity: int, c: dict, d: int = 1) -> "SparsePoly":
        p = cls.__new__(cls)
        p._init(arity, c, d)
        return p

    def __setattr__(self, name, value):
        raise AttributeError("SparsePoly is immutable")

    def __reduce__(self):
        return (SparsePoly, (self.arity, self.terms))

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, arity: int) -> "SparsePoly":
        return cls._raw(arity, {})

    @classmethod
    def constant(cls, c, arity: int) -> "SparsePoly":
        f = _as_fraction(c)
        return cls._raw(arity, {0: f.numerator} if f else {}, f.denominator)

    @classmethod
    def variable(cls, i: int, arity: int) -> "SparsePoly":
        if not 0 <= i < arity:
            raise ArityError(f"variable index {i} out of range for arity {arity}")
        return cls._raw(arity, {1 << K.var_shift(i, arity): 1})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "SparsePoly":
        arity = len(exps)
        f = _as_fraction(coeff)
        if not f:
            return cls.zero(arity)
        return cls._raw(arity, {K.pack(exps, arity): f.numerator}, f.denominator)

    # -- inspection ----------------------------------------------------------

    def items(self) -> Iterator[tuple[Exponents, Fraction]]:
        n, d = self.arity, self._d
        for k in sorted(self._c, reverse=True):
            yield K.unpack(k, n), Fraction(self._c[k], d)

    @property
    def terms(self) -> dict[Exponents, Fraction]:
        return dict(self.items())

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    @property
    def is_zero(self) -> bool:
        return not self._c

    @property
    def is_constant(self) -> bool:
        return not self._c or (len(self._c) == 1 and 0 in self._c)

    def constant_value(self) -> Fraction:
        return Fraction(self._c.get(0, 0), self._d)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return Fraction(self._c.get(K.pack(exps, self.arity), 0), self._d)

    def leading_term(self) -> tuple[Exponents, Fraction]:
        if not self._c:
            raise ValueError("zero polynomial has no leading term")
        k, c = K.leading(self._c)
        return K.unpack(k, self.arity), Fraction(c, self._d)

    def degree(self, var: int) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        self._check_var(var)
        return K.degree_in(self._c, var, self.arity)

    def degrees(self) -> tuple[int, ...]:
        return tuple(self.degree(i) for i in range(self.arity))

    def total_degree(self) -> int:
        return max((sum(K.unpack(k, self.arity)) for k in self._c), default=-1)

    def _check_var(self, var: int) -> None:
        if not 0 <= var < self.arity:
            raise ArityError(f"variable index {var} out of range for arity {self.arity}")

    # -- arithmetic ------------------------------------------------------------

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            if other.arity != self.arity:
                raise ArityError(f"arity mismatch: {self.arity} vs {other.arity}")
            return other
        if isinstance(other, (int, Rational)):
            return SparsePoly.constant(other, self.arity)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self._d == o._d:
            return SparsePoly._raw(self.arity, K.add(self._c, o._c), self._d)
        g = gcd(self._d, o._d)
        a = K.scale(self._c, o._d // g)
        b = K.scale(o._c, self._d // g)
        return SparsePoly._raw(self.arity, K.add(a, b), self._d // g * o._d)

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        return SparsePoly._raw(self.arity, K.neg(self._c), self._d)

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
        return SparsePoly._raw(self.arity, K.mul(self._c, o._c, self.arity), self._d * o._d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            f = _as_fraction(other)
            if not f:
                raise ZeroDivisionError("polynomial divided by zero")
            return self * (1 / f)
        return NotImplemented

    def __pow__(self, e: int) -> "SparsePoly":
        if not isinstance(e, int) or e < 0:
            raise ValueError(f"polynomial exponent must be a non-negative int, got {e!r}")
        return SparsePoly._raw(self.arity, K.power(self._c, e, self.arity), self._d**e)

    def exact_div(self, other: "SparsePoly") -> "SparsePoly | None":
        """Quotient when ``other`` divides ``self`` exactly over Q, else ``None``."""
        o = self._coerce(other)
        if o.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        oc, op = K.primitive(o._c)
        q = K.divexact(self._c, op, self.arity)
        if q is None:
            return None
        # self = c/d, other = oc*op/od  =>  quotient = q * od / (d * oc)
        num, den = o._d, self._d * oc
        if den < 0:
            num, den = -num, -den
        return SparsePoly._raw(self.arity, K.scale(q, num), den)

    def __eq__(self, other) -> bool:
        if isinstance(other, SparsePoly):
            return self.arity == other.arity and self._d == other._d and self._c == other._c
        if isinstance(other, (int, Rational)):
            return self.is_constant and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.arity, frozenset(self._c.items()), self._d)))
        return self._hash

    # -- calculus and evaluation ---------------------------------------------

    def derivative(self, var: int) -> "SparsePoly":
        self._check_var(var)
        s = K.var_shift(var, self.arity)
        one = 1 << s
        out = {}
        for k, c in self._c.items():
            e = (k >> s) & K.FIELD
            if e:
                out[k - one] = c * e
        return SparsePoly._raw(self.arity, out, self._d)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.arity:
            raise ArityError(f"point has {len(point)} coordinates, polynomial has arity {self.arity}")
        pt = [_as_fraction(v) for v in point]
        total = Fraction(0)
        for exps, c in self.items():
            t = c
            for v, e in zip(pt, exps):
                if e:
                    t *= v**e
            total += t
        return total

    def _modp_terms(self, prime: int) -> list:
        cached = self._modp
        if cached is not None and cached[0] == prime:
            return cached[1]
        inv = _inverse_mod(self._d, prime)
        terms = [(c * inv % prime,) + K.unpack(k, self.arity) for k, c in self._c.items()]
        object.__setattr__(self, "_modp", (prime, terms))
        return terms

    def evaluate_mod(self, point: Sequence[int], prime: int) -> int:
        """Evaluate with every coefficient ``num/den`` read as ``num * den^-1 mod prime``."""
        if len(point) != self.arity:
            raise ArityError(f"point has {len(point)} coordinates, polynomial has arity {self.arity}")
        tables = [_power_table(v % prime, max(d, 0), prime) for v, d in zip(point, self.degrees())]
        return self.evaluate_mod_tables(tables, prime)

    def evaluate_mod_tables(self, tables: Sequence[Sequence[int]], prime: int) -> int:
        """Mod-p evaluation given ``tables[i][e] = point[i]**e mod prime`` covering every degree."""
        terms = self._modp_terms(prime)
        if not terms:
            return 0
        n = self.arity
        # one reduction per polynomial; the unreduced products stay a few hundred bits wide
        if n == 1:
            (p0,) = tables
            total = sum(c * p0[a] for c, a in terms)
        elif n == 2:
            p0, p1 = tables
            total = sum(c * p0[a] * p1[b] for c, a, b in terms)
        elif n == 3:
            p0, p1, p2 = tables
            total = sum(c * p0[a] * p1[b] * p2[d] for c, a, b, d in terms)
        elif n == 4:
            p0, p1, p2, p3 = tables
            total = sum(c * p0[a] * p1[b] * p2[d] * p3[e] for c, a, b, d, e in terms)
        else:
            total = 0
            for c, *exps in terms:
                for tab, e in zip(tables, exps):
                    c = c * tab[e] % prime
                total += c
        return total % prime

    # -- structural maps -------------------------------------------------------

    def extend(self, arity: int) -> "SparsePoly":
        """Same polynomial viewed in a ring with extra trailing variables."""
        if arity < self.arity:
            raise ArityError(f"cannot extend arity {self.arity} to {arity}")
        s = K.SLOT * (arity - self.arity)
        return SparsePoly._raw(arity, {k << s: c for k, c in self._c.items()}, self._d)

    def reflect(self) -> tuple["SparsePoly", tuple[int, ...]]:
        """Return ``(q, d)`` with ``self(1/x) = q(x) / x**d``, ``d`` the per-variable degrees."""
        if not self._c:
            return self, (0,) * self.arity
        degs = self.degrees()
        top = K.pack(degs, self.arity)
        # top dominates every key fieldwise, so the subtraction never borrows
        out = {top - k: c for k, c in self._c.items()}
        return SparsePoly._raw(self.arity, out, self._d), degs

    def __repr__(self) -> str:
        return f"SparsePoly({self.arity}, {self.terms!r})"

    def __str__(self) -> str:
        from .textfmt import format_poly

        return format_poly(self)


def _inverse_mod(d: int, prime: int) -> int:
    if d % prime == 0:
        raise BadPrimeError(f"denominator {d} vanishes mod {prime}; bad prime, choose another")
    return pow(d, -1, prime)


def _power_table(v: int, deg: int, prime: int) -> list[int]:
    out = [1] * (deg + 1 if deg > 0 else 1)
    for i in range(1, deg + 1):
        out[i] = out[i - 1] * v % prime
    return out


# Functional aliases mirroring the operation names used in the docs.


def poly_add(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    return a + b


def poly_mul(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    return a * b


def poly_pow(a: SparsePoly, e: int) -> SparsePoly:
    return a**e


def poly_partial_derivative(p: SparsePoly, var: int) -> SparsePoly:
    return p.derivative(var)


def poly_eval(p: SparsePoly, point: Sequence) -> Fraction:
    return p.evaluate(point)


def poly_eval_modp(p: SparsePoly, point: Sequence[int], prime: int) -> int:
    return p.evaluate_mod(point, prime)
