"""Packed sparse integer polynomials.

A polynomial in ``n`` variables is a ``dict`` mapping a packed exponent key to
a nonzero ``int`` coefficient.  Exponent ``e_i`` of variable ``i`` occupies the
``SLOT``-bit field starting at bit ``SLOT * (n - 1 - i)``, so variable 0 is the
most significant field and plain integer comparison of keys is the pure
lexicographic term order.  Monomial multiplication is key addition.

The top bit of every field is a guard bit that must stay clear; it lets
:func:`_slot_ge` compare all exponents at once and lets products detect
exponent overflow without unpacking.
"""

from __future__ import annotations

import heapq
from functools import lru_cache
from math import gcd, isqrt

SLOT = 16
FIELD = (1 << SLOT) - 1
MAX_EXPONENT = (1 << (SLOT - 1)) - 1

HEU_GCD_MAX = 6


class HeuristicGCDFailed(Exception):
    pass


@lru_cache(maxsize=None)
def guard_mask(n: int) -> int:
    return sum(1 << (SLOT * i + SLOT - 1) for i in range(n))


def pack(exps, n: int) -> int:
    key = 0
    for e in exps:
        if e < 0 or e > MAX_EXPONENT:
            raise OverflowError(f"exponent {e} outside 0..{MAX_EXPONENT}")
        key = (key << SLOT) | e
    return key


def unpack(key: int, n: int) -> tuple[int, ...]:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        out[i] = key & FIELD
        key >>= SLOT
    return tuple(out)


def var_shift(i: int, n: int) -> int:
    return SLOT * (n - 1 - i)


def exponent_of(key: int, i: int, n: int) -> int:
    return (key >> var_shift(i, n)) & FIELD


def _slot_ge(a: int, b: int, h: int) -> bool:
    """True iff every exponent field of ``a`` is >= the matching field of ``b``."""
    return ((a | h) - b) & h == h


def _check_overflow(p: dict, n: int) -> None:
    h = guard_mask(n)
    for k in p:
        if k & h:
            raise OverflowError(f"exponent exceeds {MAX_EXPONENT}")


# -- ring operations -------------------------------------------------------


def add(a: dict, b: dict) -> dict:
    if len(a) < len(b):
        a, b = b, a
    r = dict(a)
    for k, c in b.items():
        v = r.get(k, 0) + c
        if v:
            r[k] = v
        else:
            del r[k]
    return r


def sub(a: dict, b: dict) -> dict:
    r = dict(a)
    for k, c in b.items():
        v = r.get(k, 0) - c
        if v:
            r[k] = v
        else:
            del r[k]
    return r


def neg(a: dict) -> dict:
    return {k: -c for k, c in a.items()}


def scale(a: dict, c: int) -> dict:
    if not c:
        return {}
    if c == 1:
        return a
    return {k: v * c for k, v in a.items()}


def exquo_ground(a: dict, c: int) -> dict:
    if c == 1:
        return a
    return {k: v // c for k, v in a.items()}


def shift(a: dict, key: int) -> dict:
    """Multiply by the monomial with packed exponent ``key``."""
    if not key:
        return a
    return {k + key: c for k, c in a.items()}


def mul(a: dict, b: dict, n: int) -> dict:
    if not a or not b:
        return {}
    if len(a) < len(b):
        a, b = b, a
    if len(b) == 1:
        ((kb, cb),) = b.items()
        r = {k + kb: c * cb for k, c in a.items()}
    else:
        r: dict = {}
        get = r.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                r[k] = get(k, 0) + ca * cb
        r = {k: c for k, c in r.items() if c}
    _check_overflow(r, n)
    return r


def power(a: dict, e: int, n: int) -> dict:
    if e < 0:
        raise ValueError("negative exponent")
    if e == 0:
        return {0: 1}
    if len(a) == 1:
        ((k, c),) = a.items()
        if max(unpack(k, n), default=0) * e > MAX_EXPONENT:
            raise OverflowError(f"exponent exceeds {MAX_EXPONENT}")
        return {k * e: c**e}
    result = None
    base = a
    while True:
        if e & 1:
            result = base if result is None else mul(result, base, n)
        e >>= 1
        if not e:
            return result
        base = mul(base, base, n)


def content(a: dict) -> int:
    return gcd(*a.values()) if a else 0


def leading(a: dict) -> tuple[int, int]:
    k = max(a)
    return k, a[k]


def monomial_content(a: dict, n: int) -> int:
    """Packed key of the largest monomial dividing every term of ``a``."""
    it = iter(a)
    lo = list(unpack(next(it), n))
    for k in it:
        for i in range(n - 1, -1, -1):
            e = k & FIELD
            if e < lo[i]:
                lo[i] = e
            k >>= SLOT
    return pack(lo, n)


def primitive(a: dict) -> tuple[int, dict]:
    """Split ``a`` into (content, primitive part) with positive leading coefficient."""
    if not a:
        return 0, a
    c = content(a)
    if a[max(a)] < 0:
        c = -c
    return c, exquo_ground(a, c)


def degree_in(a: dict, i: int, n: int) -> int:
    s = var_shift(i, n)
    return max(((k >> s) & FIELD for k in a), default=-1)


# -- division ---------------------------------------------------------------


def divexact(a: dict, b: dict, n: int):
    """Exact quotient ``a / b`` in Z[x], or ``None`` when ``b`` does not divide ``a``."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return {}
    h = guard_mask(n)
    lb = max(b)
    cb = b[lb]
    la = max(a)
    if not _slot_ge(la, lb, h) or not _slot_ge(min(a), min(b), h):
        return None
    if len(b) == 1:
        q = {}
        for k, c in a.items():
            if not _slot_ge(k, lb, h):
                return None
            v, rem = divmod(c, cb)
            if rem:
                return None
            q[k - lb] = v
        return q
    if len(a) < len(b):
        return None
    r = dict(a)
    heap = [-k for k in r]
    heapq.heapify(heap)
    q = {}
    rest = [(k, c) for k, c in b.items() if k != lb]
    while r:
        k = -heapq.heappop(heap)
        c = r.get(k)
        if c is None:
            continue
        if not _slot_ge(k, lb, h):
            return None
        qc, rem = divmod(c, cb)
        if rem:
            return None
        qk = k - lb
        q[qk] = qc
        del r[k]
        for kb, c2 in rest:
            kk = kb + qk
            old = r.get(kk)
            if old is None:
                r[kk] = -qc * c2
                heapq.heappush(heap, -kk)
            else:
                v = old - qc * c2
                if v:
                    r[kk] = v
                else:
                    del r[kk]
    return q


def divides(b: dict, a: dict, n: int) -> bool:
    return divexact(a, b, n) is not None


# -- evaluation and interpolation used by the heuristic gcd ---------------------


def _eval_last(a: dict, n: int, x: int):
    """Substitute integer ``x`` for the last variable."""
    if n == 1:
        return sum(c * x**k for k, c in a.items())
    pw: dict = {}
    r: dict = {}
    for k, c in a.items():
        e = k & FIELD
        p = pw.get(e)
        if p is None:
            p = pw[e] = x**e
        rk = k >> SLOT
        r[rk] = r.get(rk, 0) + c * p
    return {k: c for k, c in r.items() if c}


def _smod(c: int, x: int) -> int:
    c %= x
    return c - x if c > x // 2 else c


def _interpolate(h, x: int, n: int) -> dict:
    """Inverse of :func:`_eval_last` via symmetric ``x``-adic expansion."""
    r: dict = {}
    i = 0
    if n == 1:
        while h:
            if i > MAX_EXPONENT:
                return {}
            g = _smod(h, x)
            if g:
                r[i] = g
            h = (h - g) // x
            i += 1
        return r
    while h:
        if i > MAX_EXPONENT:
            return {}
        nxt = {}
        for k, c in h.items():
            g = _smod(c, x)
            if g:
                r[(k << SLOT) | i] = g
            v = (c - g) // x
            if v:
                nxt[k] = v
        h = nxt
        i += 1
    return r


def _max_norm(a: dict) -> int:
    return max(abs(c) for c in a.values())


def heugcd(f: dict, g: dict, n: int) -> dict:
    """Heuristic gcd of primitive polynomials (Char, Geddes and Gonnet).

    Evaluates the last variable at a large integer, recurses, and lifts the
    result back by ``x``-adic expansion.  A lifted candidate is accepted only
    after it is verified to divide both inputs.
    """
    fn, gn = _max_norm(f), _max_norm(g)
    b = 2 * min(fn, gn) + 29
    x = max(
        min(b, 99 * isqrt(b)),
        2 * min(fn // abs(f[max(f)]), gn // abs(g[max(g)])) + 2,
    )
    for _ in range(HEU_GCD_MAX):
        ff = _eval_last(f, n, x)
        gg = _eval_last(g, n, x)
        if ff and gg:
            if n == 1:
                hh = gcd(ff, gg)
                cff, cfg = ff // hh, gg // hh
            else:
                hh = gcd_poly(ff, gg, n - 1)
                cff = divexact(ff, hh, n - 1)
                cfg = divexact(gg, hh, n - 1)
            for src, cand in ((None, hh), (f, cff), (g, cfg)):
                lifted = primitive(_interpolate(cand, x, n))[1]
                if not lifted:
                    continue
                if src is None:
                    h = lifted
                else:
                    h = divexact(src, lifted, n)
                    if h is None:
                        continue
                    h = primitive(h)[1]
                if divides(h, f, n) and divides(h, g, n):
                    return h
        x = 73794 * x * isqrt(isqrt(x)) // 27011
    raise HeuristicGCDFailed


# -- primitive PRS fallback ---------------------------------------------------


def _main_degree(a: dict, n: int) -> int:
    return max(a) >> var_shift(0, n)


def _main_coeff(a: dict, d: int, n: int) -> dict:
    """Coefficient of ``x_0**d`` as a polynomial in the remaining variables."""
    s = var_shift(0, n)
    low = (1 << s) - 1
    return {k & low: c for k, c in a.items() if k >> s == d}


def _main_content(a: dict, n: int) -> dict:
    s = var_shift(0, n)
    low = (1 << s) - 1
    by_deg: dict = {}
    for k, c in a.items():
        by_deg.setdefault(k >> s, {})[k & low] = c
    cont: dict = {}
    for part in sorted(by_deg.values(), key=len):
        cont = gcd_poly(cont, part, n - 1)
        if cont == {0: 1}:
            break
    return cont


def _prem(f: dict, g: dict, n: int) -> dict:
    s = var_shift(0, n)
    df, dg = _main_degree(f, n), _main_degree(g, n)
    lcg = _main_coeff(g, dg, n)
    r = f
    steps = df - dg + 1
    while r and _main_degree(r, n) >= dg:
        dr = _main_degree(r, n)
        lcr = _main_coeff(r, dr, n)
        r = sub(mul(lcg, r, n), shift(mul(lcr, g, n), (dr - dg) << s))
        steps -= 1
    if steps > 0:
        r = mul(power(lcg, steps, n), r, n)
    return r


def prs_gcd(f: dict, g: dict, n: int) -> dict:
    """Gcd by the primitive polynomial remainder sequence in ``x_0``."""
    if n == 0:
        return {0: gcd(f.get(0, 0), g.get(0, 0))}
    cf, cg = _main_content(f, n), _main_content(g, n)
    c = gcd_poly(cf, cg, n - 1)
    a = divexact(f, cf, n)
    b = divexact(g, cg, n)
    if _main_degree(a, n) < _main_degree(b, n):
        a, b = b, a
    while True:
        if _main_degree(b, n) == 0:
            return c
        r = _prem(a, b, n)
        if not r:
            break
        a, b = b, divexact(r, _main_content(r, n), n)
    return mul(c, primitive(b)[1], n)


# -- gcd entry point ----------------------------------------------------------

_use_heuristic = True


def gcd_poly(a: dict, b: dict, n: int) -> dict:
    """Gcd over Z with positive leading coefficient; includes the integer content gcd."""
    if not a or not b:
        c, p = primitive(a or b)
        return scale(p, abs(c))
    c = gcd(content(a), content(b))
    if n == 0:
        return {0: c}
    ma, mb = monomial_content(a, n), monomial_content(b, n)
    mono = 0
    for i in range(n):
        s = var_shift(i, n)
        mono |= min((ma >> s) & FIELD, (mb >> s) & FIELD) << s
    a1 = primitive(shift(a, -ma) if ma else a)[1]
    b1 = primitive(shift(b, -mb) if mb else b)[1]
    if len(a1) == 1 or len(b1) == 1:
        core = {0: 1}
    elif a1 == b1:
        core = a1
    elif len(a1) <= len(b1) and divides(a1, b1, n):
        core = a1
    elif len(b1) <= len(a1) and divides(b1, a1, n):
        core = b1
    else:
        core = None
        if _use_heuristic:
            try:
                core = heugcd(a1, b1, n)
            except HeuristicGCDFailed:
                core = None
        if core is None:
            core = prs_gcd(a1, b1, n)
    return scale(shift(core, mono), c)
