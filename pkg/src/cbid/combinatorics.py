"""Exact binomial and multinomial coefficients."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable


def rat_binomial(n: int, r: int) -> Fraction:
    """``C(n, r)`` as an exact rational, zero when ``r < 0`` or ``r > n``."""
    if n < 0:
        raise ValueError(f"rat_binomial needs n >= 0, got {n}")
    if r < 0 or r > n:
        return Fraction(0)
    return Fraction(comb(n, r))


@lru_cache(maxsize=4096)
def _multinomial(orders: tuple[int, ...]) -> int:
    total = 0
    out = 1
    for k in orders:
        total += k
        out *= comb(total, k)
    return out


def multinomial(orders: Iterable[int]) -> Fraction:
    """``(sum orders)! / prod(order!)``."""
    orders = tuple(orders)
    if any(k < 0 for k in orders):
        raise ValueError(f"multinomial orders must be non-negative, got {orders}")
    return Fraction(_multinomial(orders))


def factorial_product(orders: Iterable[int]) -> int:
    out = 1
    for k in orders:
        out *= factorial(k)
    return out
