"""Plain-text and LaTeX renderings of polynomials, and a parser for the plain form.

Plain syntax: ``3/2*x^2*y - z + 1``, rational functions as ``(num)/(den)``.
Coefficients are exact ``num/den``.  The printer and :func:`parse` are
inverse to each other up to normalization.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .poly import SparsePoly
from .ratfunc import RationalFunction


def default_names(arity: int, prefix: str | None = None) -> list[str]:
    if prefix is not None:
        return [f"{prefix}{i + 1}" for i in range(arity)]
    if arity <= 3:
        return ["x", "y", "z"][:arity]
    return [f"x{i + 1}" for i in range(arity)]


def _display_order(p: SparsePoly) -> list:
    # descending lex, rotated so the first printed coefficient is positive when possible
    items = list(p.items())
    for i, (_, c) in enumerate(items):
        if c > 0:
            return items[i:] + items[:i]
    return items


def _frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _monomial(exps, c: Fraction, names: Sequence[str]) -> str:
    factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e]
    if not factors:
        return _frac(c)
    body = "*".join(factors)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{_frac(c)}*{body}"


def format_poly(p: SparsePoly, names: Sequence[str] | None = None) -> str:
    names = names or default_names(p.arity)
    if p.is_zero:
        return "0"
    out = []
    for i, (exps, c) in enumerate(_display_order(p)):
        if i == 0:
            out.append(_monomial(exps, c, names))
        elif c < 0:
            out.append(" - " + _monomial(exps, -c, names))
        else:
            out.append(" + " + _monomial(exps, c, names))
    return "".join(out)


def _is_atom(p: SparsePoly) -> bool:
    if len(p) != 1:
        return False
    exps, c = p.leading_term()
    if not any(exps):
        return c > 0
    return c == 1 and sum(1 for e in exps if e) == 1


def format_rf(f: RationalFunction, names: Sequence[str] | None = None) -> str:
    names = names or default_names(f.arity)
    if f.is_polynomial:
        return format_poly(f.as_poly(), names)
    num = format_poly(f.num, names)
    if len(f.num) > 1:
        num = f"({num})"
    den = format_poly(f.den, names)
    if not _is_atom(f.den):
        den = f"({den})"
    return f"{num}/{den}"


def format_sum(terms: Sequence[RationalFunction], names: Sequence[str] | None = None) -> str:
    """Join terms with `` + ``, parenthesizing multi-monomial polynomial terms."""
    if not terms:
        return "0"
    out = []
    for i, t in enumerate(terms):
        s = format_rf(t, names)
        if t.is_polynomial and len(t.num) > 1:
            s = f"({s})"
        if i == 0:
            out.append(s)
        elif s.startswith("-"):
            out.append(" - " + s[1:])
        else:
            out.append(" + " + s)
    return "".join(out)


# -- LaTeX -------------------------------------------------------------------------


def _latex_monomial(exps, c: Fraction, names: Sequence[str]) -> str:
    factors = [n if e == 1 else f"{n}^{{{e}}}" for n, e in zip(names, exps) if e]
    if not factors:
        return _latex_frac(c)
    body = " ".join(factors)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{_latex_frac(c)} {body}"


def _latex_frac(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    sign = "-" if c < 0 else ""
    return f"{sign}\\frac{{{abs(c.numerator)}}}{{{c.denominator}}}"


def latex_poly(p: SparsePoly, names: Sequence[str] | None = None) -> str:
    names = names or default_names(p.arity)
    if p.is_zero:
        return "0"
    out = []
    for i, (exps, c) in enumerate(_display_order(p)):
        if i == 0:
            out.append(_latex_monomial(exps, c, names))
        elif c < 0:
            out.append(" - " + _latex_monomial(exps, -c, names))
        else:
            out.append(" + " + _latex_monomial(exps, c, names))
    return "".join(out)


def latex_rf(f: RationalFunction, names: Sequence[str] | None = None) -> str:
    if f.is_polynomial:
        return latex_poly(f.as_poly(), names)
    return f"\\frac{{{latex_poly(f.num, names)}}}{{{latex_poly(f.den, names)}}}"


# -- parser -------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class ParseError(ValueError):
    pass


def _tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        elif op is not None and op.strip():
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r}")
            out.append(("op", op))
    return out


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.toks = _tokenize(text)
        self.i = 0
        self.n = len(names)
        self.index = {name: k for k, name in enumerate(names)}

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or 'token'}, got {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self) -> RationalFunction:
        acc = [self.term()]
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            acc.append(t if op == "+" else -t)
        if len(acc) == 1:
            return acc[0]
        from .ratfunc import rf_sum

        return rf_sum(acc)

    def term(self) -> RationalFunction:
        val = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            val = val * rhs if op == "*" else val / rhs
        return val

    def unary(self) -> RationalFunction:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> RationalFunction:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, val = self.take()
            if kind != "num":
                raise ParseError(f"exponent must be an integer, got {val!r}")
            return base ** (sign * int(val))
        return base

    def atom(self) -> RationalFunction:
        kind, val = self.take()
        if kind == "num":
            return RationalFunction.constant(int(val), self.n)
        if kind == "name":
            if val not in self.index:
                raise ParseError(f"unknown variable {val!r}")
            return RationalFunction.variable(self.index[val], self.n)
        if val == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError(f"unexpected token {val!r}")


def parse(text: str, names: Sequence[str]) -> RationalFunction:
    """Parse the plain syntax into a normalized :class:`RationalFunction`."""
    p = _Parser(text, names)
    out = p.expr()
    if p.i != len(p.toks):
        raise ParseError(f"trailing input at token {p.toks[p.i][1]!r}")
    return out


def parse_poly(text: str, names: Sequence[str]) -> SparsePoly:
    return parse(text, names).as_poly()
