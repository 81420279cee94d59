"""Continued fractions and Diophantine approximation pairs.

A pair ``(m, n)`` approximates ``theta`` when ``n*theta - m`` is small; the
numerator ``m`` comes first throughout the package, and the lattice point
attached to the pair is ``m*mu + n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

import gmpy2
from gmpy2 import mpfr

from .errors import InputError, MoebiusPole, ZeroDenominator
from .numerics import QuadIrr, context

Theta = Union[QuadIrr, Fraction, int, "mpfr"]

# a period search never needs more than this many extra surd steps for the
# radicands used in practice; the bound only protects against runaway loops
_PERIOD_SEARCH_LIMIT = 100_000


def _is_float(theta) -> bool:
    return isinstance(theta, type(mpfr(0)))


@dataclass(frozen=True)
class CFExpansion:
    theta: Theta
    partial_quotients: tuple[int, ...]
    period: tuple[int, int] | None = None
    terminating: bool = False
    heuristic: bool = False
    # quotients through at least one full period, for periodic extension
    cycle_source: tuple[int, ...] = field(default=(), repr=False, compare=False)

    def quotient(self, j: int) -> int:
        """j-th partial quotient, extending periodic expansions as needed."""
        if j < len(self.partial_quotients):
            return self.partial_quotients[j]
        if self.period is None:
            raise IndexError(f"quotient {j} beyond computed expansion")
        pre, per = self.period
        src = self.cycle_source or self.partial_quotients
        if j < len(src):
            return src[j]
        return src[pre + (j - pre) % per]


@dataclass(frozen=True)
class DAPair:
    m: int
    n: int
    theta: Theta = field(repr=False)
    err: object = None  # n*theta - m, exact QuadIrr/Fraction or mpfr

    def __post_init__(self):
        if self.err is None:
            object.__setattr__(self, "err", _err(self.m, self.n, self.theta))

    @property
    def pair(self) -> tuple[int, int]:
        return (self.m, self.n)


def _err(m: int, n: int, theta):
    if _is_float(theta):
        with context(theta.precision):
            return n * theta - m
    if isinstance(theta, QuadIrr):
        return n * theta - m
    return n * Fraction(theta) - m


def _surd_state(theta: QuadIrr) -> tuple[int, int, int]:
    """Write theta as (P + sqrt(D)) / Q with Q | D - P^2."""
    a, b, c, d = theta.a, theta.b, theta.c, theta.d
    if b < 0:
        a, b, c = -a, -b, -c
    # multiply through by |c| so that Q divides D - P^2
    P = a * abs(c)
    D = b * b * d * c * c
    Q = c * abs(c)
    return P, Q, D


def _surd_floor(P: int, Q: int, D: int) -> int:
    r = math.isqrt(D)
    if Q > 0:
        return (P + r) // Q
    return (-P - r - 1) // (-Q)


def cf_expand(theta: Theta, max_terms: int) -> CFExpansion:
    """Partial quotients of theta.

    Quadratic irrationals use the exact (P, Q) surd recurrence, which also
    detects the period; rationals run the Euclidean algorithm; an ``mpfr``
    theta is expanded heuristically until convergents are within
    2**(-prec/2).
    """
    if max_terms < 1:
        raise InputError("max_terms must be >= 1")
    if _is_float(theta):
        return _cf_float(theta, max_terms)
    if isinstance(theta, QuadIrr) and theta.is_rational:
        theta = theta.to_fraction()
    if not isinstance(theta, QuadIrr):
        x = Fraction(theta)
        quotients = []
        num, den = x.numerator, x.denominator
        while den and len(quotients) < max_terms:
            q, r = divmod(num, den)
            quotients.append(q)
            num, den = den, r
        return CFExpansion(x, tuple(quotients), None, terminating=den == 0)
    return _cf_quad(theta, max_terms)


@lru_cache(maxsize=256)
def _cf_quad(theta: QuadIrr, max_terms: int) -> CFExpansion:
    P, Q, D = _surd_state(theta)
    seen: dict[tuple[int, int], int] = {}
    quotients: list[int] = []
    period = None
    j = 0
    while j < max_terms + _PERIOD_SEARCH_LIMIT:
        if period is None:
            state = (P, Q)
            if state in seen:
                period = (seen[state], j - seen[state])
            else:
                seen[state] = j
        if j >= max_terms and period is not None:
            break
        a = _surd_floor(P, Q, D)
        quotients.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
        j += 1
    head = tuple(quotients)
    return CFExpansion(theta, head[:max_terms], period, cycle_source=head)


def _cf_float(theta, max_terms: int) -> CFExpansion:
    prec = theta.precision
    quotients = []
    with context(prec):
        x = theta
        tol = gmpy2.exp2(-prec // 2)
        p0, q0, p1, q1 = 1, 0, 0, 1
        while len(quotients) < max_terms:
            a = int(gmpy2.floor(x))
            quotients.append(a)
            p0, p1 = a * p0 + p1, p0
            q0, q1 = a * q0 + q1, q0
            if abs(q0 * theta - p0) < tol:
                break
            frac = x - a
            if gmpy2.is_zero(frac):
                break
            x = 1 / frac
    return CFExpansion(theta, tuple(quotients), None, heuristic=True)


def convergents(cf: CFExpansion, count: int) -> list[DAPair]:
    """Convergent pairs (p_j, q_j), j = 0 .. count-1, with exact errors."""
    avail = len(cf.partial_quotients) if cf.period is None else None
    if avail is not None and count > avail:
        raise InputError(f"requested {count} convergents, only {avail} quotients available")
    out = []
    p_prev, q_prev, p, q = 1, 0, cf.quotient(0), 1
    out.append(DAPair(p, q, cf.theta))
    for j in range(1, count):
        a = cf.quotient(j)
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append(DAPair(p, q, cf.theta))
    return out[:count]


@lru_cache(maxsize=256)
def convergent_table(theta: QuadIrr | Fraction, count: int) -> tuple[DAPair, ...]:
    """Cached convergents for hashable exact thetas."""
    cf = cf_expand(theta, max(count, 1))
    if cf.period is None and len(cf.partial_quotients) < count:
        raise InputError(f"{theta} has only {len(cf.partial_quotients)} convergents")
    return tuple(convergents(cf, count))


def pair_quality(p: DAPair):
    """|n*theta - m|, exact when theta is exact."""
    return abs(p.err)


def moebius_real(A, theta):
    """(a*theta + b)/(c*theta + d) for exact or float real theta."""
    a, b, c, d = A
    den = c * theta + d
    if (not _is_float(den) and den == 0) or (_is_float(den) and gmpy2.is_zero(den)):
        raise MoebiusPole(f"c*theta + d = 0 for A = {A}")
    if _is_float(theta):
        with context(theta.precision):
            return (a * theta + b) / den
    if isinstance(theta, QuadIrr):
        return (a * theta + b) / den
    return Fraction(a * theta + b) / Fraction(den)


def transform_pair(A, p: DAPair, theta=None) -> DAPair:
    """Apply A to (m, n); the result approximates A(theta)."""
    a, b, c, d = _entries(A)
    if a * d - b * c not in (1, -1):
        raise InputError(f"det A = {a * d - b * c}, expected +-1")
    theta = p.theta if theta is None else theta
    new_theta = moebius_real((a, b, c, d), theta)
    return DAPair(a * p.m + b * p.n, c * p.m + d * p.n, new_theta)


def group_combination(pairs: Sequence[DAPair], coeffs: Sequence[int], theta=None,
                      require_nonzero: bool = False) -> DAPair:
    """Integer combination sum(c_j * pair_j) with its error recomputed."""
    if len(pairs) != len(coeffs):
        raise InputError("pairs and coeffs differ in length")
    if theta is None:
        if not pairs:
            raise InputError("theta required for an empty combination")
        theta = pairs[0].theta
    m = sum(c * p.m for c, p in zip(coeffs, pairs))
    n = sum(c * p.n for c, p in zip(coeffs, pairs))
    if require_nonzero and n == 0:
        raise ZeroDenominator("combination has n = 0")
    return DAPair(m, n, theta)


def _entries(A) -> tuple[int, int, int, int]:
    if hasattr(A, "entries"):
        return A.entries
    return tuple(A)
