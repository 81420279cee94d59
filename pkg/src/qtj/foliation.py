"""Moduli (mu, theta), GL(2,Z) actions and fundamental-domain reduction."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import gmpy2
from gmpy2 import mpfr

from .errors import InputError, PrecisionExhausted
from .numerics import (
    BigComplex,
    GaussianRational,
    QuadComplex,
    QuadIrr,
    context,
    exact_complex,
    exact_parts,
    is_exact,
)


class _Infinity(enum.Enum):
    INF = "inf"

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"


INFINITY = _Infinity.INF

Slope = Union[QuadIrr, Fraction, int, "mpfr", _Infinity]


@dataclass(frozen=True)
class GL2Z:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det not in (1, -1):
            raise InputError(f"det {self.det} for {self.entries}; GL(2,Z) needs +-1")

    @classmethod
    def identity(cls) -> "GL2Z":
        return cls(1, 0, 0, 1)

    @classmethod
    def random(cls, rng: random.Random, bound: int = 5) -> "GL2Z":
        """Uniform rejection sample among matrices with entries in [-bound, bound]."""
        while True:
            a, b, c, d = (rng.randint(-bound, bound) for _ in range(4))
            if a * d - b * c in (1, -1):
                return cls(a, b, c, d)

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def T(self) -> "GL2Z":
        return GL2Z(self.a, self.c, self.b, self.d)

    def inverse(self) -> "GL2Z":
        s = self.det
        return GL2Z(s * self.d, -s * self.b, -s * self.c, s * self.a)

    def inverse_transpose(self) -> "GL2Z":
        return self.inverse().T

    def __matmul__(self, o: "GL2Z") -> "GL2Z":
        return GL2Z(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def apply_vector(self, m: int, n: int) -> tuple[int, int]:
        """A times the column vector (m, n)."""
        return (self.a * m + self.b * n, self.c * m + self.d * n)

    def moebius(self, z):
        """(a z + b) / (c z + d) for exact complex or BigComplex z."""
        num = z * self.a + self.b
        den = z * self.c + self.d
        return num / den

    def moebius_slope(self, t: Slope) -> Slope:
        """Projective action on the circle R u {inf}."""
        a, b, c, d = self.entries
        if t is INFINITY:
            return INFINITY if c == 0 else _real_div(a, c)
        den = c * t + d
        if _is_zero(den):
            return INFINITY
        return _real_div(a * t + b, den)

    def __str__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


def _is_zero(x) -> bool:
    if isinstance(x, type(mpfr(0))):
        return bool(gmpy2.is_zero(x))
    return x == 0


def _real_div(x, y):
    if isinstance(x, type(mpfr(0))) or isinstance(y, type(mpfr(0))):
        p = max(v.precision for v in (x, y) if isinstance(v, type(mpfr(0))))
        with context(p):
            return mpfr(x) / mpfr(y)
    if isinstance(x, QuadIrr) or isinstance(y, QuadIrr):
        return QuadIrr.coerce(x) / QuadIrr.coerce(y)
    q = Fraction(x) / Fraction(y)
    return q


def _im_sign(mu) -> int:
    if isinstance(mu, BigComplex):
        im = mu.imag
        return 0 if gmpy2.is_zero(im) else (1 if im > 0 else -1)
    _, im = exact_parts(mu)
    return im.sign()


@dataclass(frozen=True)
class Modulus:
    mu: object  # GaussianRational | QuadComplex | BigComplex

    def __post_init__(self):
        mu = self.mu
        if is_exact(mu) and not isinstance(mu, (GaussianRational, QuadComplex)):
            raise InputError("modulus must be non-real")
        if not (is_exact(mu) or isinstance(mu, BigComplex)):
            raise InputError(f"unsupported modulus type {type(mu).__name__}")
        if _im_sign(mu) == 0:
            raise InputError(f"Im mu must be nonzero, got {mu}")

    @property
    def half_plane_sign(self) -> int:
        return _im_sign(self.mu)

    @property
    def exact(self) -> bool:
        return is_exact(self.mu)

    def is_square(self) -> bool:
        """True iff mu is exactly +-i (lattice invariant under rotation by i)."""
        if not self.exact:
            return False
        re, im = exact_parts(self.mu)
        return re == 0 and abs(im) == 1

    def __neg__(self) -> "Modulus":
        return Modulus(-self.mu)

    def __str__(self):
        return str(self.mu)


@dataclass(frozen=True)
class FoliationPoint:
    modulus: Modulus
    theta: Slope


def as_modulus(mu) -> Modulus:
    return mu if isinstance(mu, Modulus) else Modulus(mu)


def slope_direction(p: FoliationPoint):
    """Direction of the leaf through 0: 1 + theta*mu, or mu when theta = inf."""
    mu = p.modulus.mu
    if p.theta is INFINITY:
        return mu
    theta = p.theta
    if isinstance(theta, type(mpfr(0))):
        prec = mu.prec if isinstance(mu, BigComplex) else theta.precision
        mu_b = mu if isinstance(mu, BigComplex) else BigComplex(0, prec) + mu
        return BigComplex(1, prec) + mu_b * BigComplex.from_parts(theta, 0, prec)
    if isinstance(mu, BigComplex):
        return mu * theta + 1
    return exact_complex(1) + mu * exact_complex(theta)


def act(A: GL2Z, p: FoliationPoint) -> FoliationPoint:
    """A.(mu, theta) = (A(mu), A^{-T}(theta))."""
    mu = A.moebius(p.modulus.mu)
    return FoliationPoint(Modulus(mu), A.inverse_transpose().moebius_slope(p.theta))


def canonicalize_sign(p: FoliationPoint) -> FoliationPoint:
    """Representative of {(mu, theta), (-mu, -theta)} with Im mu > 0."""
    if p.modulus.half_plane_sign > 0:
        return p
    theta = p.theta if p.theta is INFINITY else -p.theta
    return FoliationPoint(-p.modulus, theta)


_S = GL2Z(0, -1, 1, 0)
_R = GL2Z(-1, 0, 0, 1)


def _translation(n: int) -> GL2Z:
    return GL2Z(1, n, 0, 1)


def reduce_modulus(m: Modulus, max_steps: int = 10_000, strict: bool = True) -> tuple[Modulus, GL2Z]:
    """Standard fundamental-domain representative and the matrix reaching it.

    Output satisfies Im > 0, -1/2 < Re <= 1/2, |mu| >= 1, with Re >= 0 on the
    unit arc.  Exact moduli are reduced with exact comparisons; BigComplex
    moduli raise PrecisionExhausted within 2**(-P/2) of the boundary unless
    ``strict`` is off, in which case the nearby representative is returned.
    """
    if m.exact:
        return _reduce_exact(m, max_steps)
    return _reduce_float(m, max_steps, strict)


def _reduce_exact(m: Modulus, max_steps: int) -> tuple[Modulus, GL2Z]:
    mu = m.mu
    M = GL2Z.identity()
    if m.half_plane_sign < 0:
        mu, M = -mu, _R @ M
    half = Fraction(1, 2)
    for _ in range(max_steps):
        re, im = exact_parts(mu)
        n = -((half - re).floor())  # ceil(re - 1/2)
        if n:
            T = _translation(-n)
            mu, M = T.moebius(mu), T @ M
        re, im = exact_parts(mu)
        if (re * re + im * im) < 1:
            mu, M = _S.moebius(mu), _S @ M
            continue
        break
    re, im = exact_parts(mu)
    if re * re + im * im == 1 and re.sign() < 0:
        mu, M = _S.moebius(mu), _S @ M
    return Modulus(mu), M


def _reduce_float(m: Modulus, max_steps: int, strict: bool = True) -> tuple[Modulus, GL2Z]:
    mu: BigComplex = m.mu
    prec = mu.prec
    M = GL2Z.identity()
    if m.half_plane_sign < 0:
        mu, M = -mu, _R @ M
    with context(prec):
        for _ in range(max_steps):
            n = int(gmpy2.ceil(mu.real - mpfr(0.5)))
            if n:
                T = _translation(-n)
                mu, M = T.moebius(mu), T @ M
            if mu.real ** 2 + mu.imag ** 2 < 1:
                mu, M = _S.moebius(mu), _S @ M
                continue
            break
        tol = gmpy2.exp2(-prec // 2)
        near_edge = abs(abs(mu.real) - mpfr(0.5)) < tol
        near_arc = abs(mu.real ** 2 + mu.imag ** 2 - 1) < tol
    if strict and (near_edge or near_arc):
        raise PrecisionExhausted(f"{mu!r} lies within 2^-{prec // 2} of the domain boundary")
    return Modulus(mu), M
