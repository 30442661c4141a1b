"""Randomized polynomial identity testing over a prime field.

Each trial draws a uniform point in ``GF(p)^n`` and evaluates every term's
numerator and denominator there.  A nonzero polynomial of total degree
``d`` vanishes at such a point with probability at most ``d / p``
(Schwartz-Zippel), so with ``p = 2^61 - 1`` a single nonzero evaluation is
conclusive and 64 zero evaluations leave a false-"holds" probability below
``(d / p)^64``.

For conditional identities the free coordinates are drawn and the bound
coordinate is computed from the parametrization, so every point lies on
the constraint variety.  Points where any denominator vanishes are redrawn.
Terms are evaluated in their original variables; the parametrization is
never substituted symbolically, which keeps this path independent of the
exact verifier.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import DegenerateSamplingError
from .identities import Identity, VerificationReport
from .poly import _power_table

MERSENNE_61 = (1 << 61) - 1
DEFAULT_SEED = 20240917

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for ``n < 3.3e24``."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FuzzConfig:
    trials: int = 64
    prime: int = MERSENNE_61
    seed: int = DEFAULT_SEED
    max_resamples: int = 100

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.max_resamples < 1:
            raise ValueError(f"max_resamples must be >= 1, got {self.max_resamples}")
        if self.prime >= 1 << 63 or not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not a prime below 2^63")


def _trial_rngs(cfg: FuzzConfig) -> list[np.random.Generator]:
    root = np.random.SeedSequence(cfg.seed & 0xFFFF_FFFF_FFFF_FFFF)
    return [np.random.default_rng(child) for child in root.spawn(cfg.trials)]


class _Evaluator:
    """Evaluates both sides at one point; ``None`` signals a pole."""

    def __init__(self, identity: Identity, prime: int):
        self.identity = identity
        self.p = prime
        top = [0] * identity.arity
        for t in identity.lhs_terms + identity.rhs_terms:
            for poly in (t.num, t.den):
                top = [max(a, b) for a, b in zip(top, poly.degrees())]
        self.top = top

    def difference(self, point: list[int]) -> int | None:
        p = self.p
        tables = [_power_table(v % p, d, p) for v, d in zip(point, self.top)]
        seen: dict = {}

        def ev(poly):
            v = seen.get(poly)
            if v is None:
                v = seen[poly] = poly.evaluate_mod_tables(tables, p)
            return v

        # accumulate num/den fractions, inverting once at the end
        acc_n, acc_d = 0, 1
        for sign, terms in ((1, self.identity.lhs_terms), (-1, self.identity.rhs_terms)):
            for t in terms:
                d = ev(t.den)
                if d == 0:
                    return None
                acc_n = (acc_n * d + sign * ev(t.num) * acc_d) % p
                acc_d = acc_d * d % p
        return acc_n * pow(acc_d, -1, p) % p



def _draw(identity: Identity, rng: np.random.Generator, cfg: FuzzConfig) -> list[int]:
    point = [int(v) for v in rng.integers(0, cfg.prime, size=identity.arity)]
    if identity.parametrization is not None:
        var, g = identity.parametrization
        num, den = g.evaluate_mod(point, cfg.prime)
        if den == 0:
            return None
        point[var] = num * pow(den, -1, cfg.prime) % cfg.prime
        if identity.constraint.evaluate_mod(point, cfg.prime) != 0:
            raise AssertionError(f"sampled point {point} is off the constraint variety")
    return point


def sample_points(identity: Identity, cfg: FuzzConfig) -> Iterator[tuple[list[int], int]]:
    """Yield ``(point, lhs - rhs mod p)`` for each trial, redrawing at poles."""
    ev = _Evaluator(identity, cfg.prime)
    for rng in _trial_rngs(cfg):
        for _ in range(cfg.max_resamples):
            point = _draw(identity, rng, cfg)
            if point is None:
                continue
            value = ev.difference(point)
            if value is not None:
                yield point, value
                break
        else:
            raise DegenerateSamplingError("degenerate sampling; raise max_resamples or change prime")


def fuzz_verify(identity: Identity, cfg: FuzzConfig | None = None) -> VerificationReport:
    """Schwartz-Zippel check of ``sum(lhs) == sum(rhs)``; stops at the first nonzero trial."""
    cfg = cfg or FuzzConfig()
    start = time.perf_counter()
    trials = 0
    detail = None
    for point, value in sample_points(identity, cfg):
        trials += 1
        if value:
            detail = f"lhs - rhs = {value} (mod {cfg.prime}) at {point}"
            break
    return VerificationReport(
        family=identity.family,
        params=identity.params,
        method="modp",
        verdict="fails" if detail else "holds",
        trials=trials,
        seed=cfg.seed,
        elapsed=time.perf_counter() - start,
        detail=detail,
        names=identity.names,
    )
