"""The Weierstrass function without correction terms and its cubic.

``wp_nc(z)`` sums (z - (m mu + n))^(-2) over every pair of a descriptor,
origin included.  Because the usual -1/omega^2 corrections are dropped, the
classical cubic acquires g1 terms:

    E(X, Y) = Y^2 - 4X^3 + 12 g1 X^2 - (12 g1^2 - g2) X + (4 g1^3 - g1 g2 + g3)

with g1 = G_1, g2 = 60 G_2, g3 = 140 G_3 summed over the same index set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import gmpy2
from gmpy2 import mpfr

from .eisenstein import DEFAULT_PRECISION, EisTriple, g_triple
from .errors import ExactModeUnavailable, InputError, PoleEncountered
from .foliation import Modulus, as_modulus
from .kernels import exact_lattice_sums, float_lattice_sums
from .numerics import (
    BigComplex,
    GaussianRational,
    QuadComplex,
    context,
    exact_complex,
    is_exact,
    to_big,
    working_precision,
)
from .schemes import (
    ClassicalCone,
    QuantumTheta,
    SchemeId,
    SetDescriptor,
    enumerate_pairs,
    stage,
    translate_set,
)


class _Pole:
    """Marker for an evaluation point that is a lattice point of the set."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "POLE"


POLE = _Pole()


@dataclass(frozen=True)
class WeierstrassEval:
    z: object
    wp: object
    wp_prime: object
    descriptor: SetDescriptor
    mu: Modulus


@dataclass(frozen=True)
class WeierPoly:
    """Cubic E(X, Y) built from a triple; coefficients are derived on access."""

    g1: object
    g2: object
    g3: object

    @classmethod
    def from_triple(cls, t: EisTriple) -> "WeierPoly":
        return cls(*t.values)

    @property
    def coefficients(self) -> tuple:
        """(c2, c1, c0) in E = Y^2 - 4X^3 + c2 X^2 + c1 X + c0."""
        g1, g2, g3 = self.g1, self.g2, self.g3
        return (12 * g1, -(12 * g1 * g1 - g2), 4 * g1 * g1 * g1 - g1 * g2 + g3)

    def __call__(self, X, Y):
        c2, c1, c0 = self.coefficients
        return Y * Y - 4 * X * X * X + c2 * X * X + c1 * X + c0


def _exact_zero(x):
    return QuadComplex(0) if isinstance(x, QuadComplex) else GaussianRational(0)


def _is_pole(z, mu: Modulus, pairs) -> bool:
    """Exact test when z and mu are exact, bitwise float test otherwise."""
    if is_exact(z) and mu.exact:
        return any((mu.mu * m + n) == z for m, n in pairs)
    prec = z.prec if isinstance(z, BigComplex) else mu.mu.prec
    zb, mb = to_big(z, prec), to_big(mu.mu, prec)
    with context(prec):
        return any(m * mb.value + n == zb.value for m, n in pairs)


def _wp_sums(z, mu: Modulus, pairs, exps, P: int, mode: str):
    if mode == "exact":
        if not (mu.exact and is_exact(z)):
            raise ExactModeUnavailable("exact mode needs exact z and mu")
        zero = _exact_zero(z) if isinstance(z, QuadComplex) else _exact_zero(mu.mu)
        zz = z if isinstance(z, (GaussianRational, QuadComplex)) else GaussianRational(z)
        return exact_lattice_sums(mu.mu, pairs, exps, zero, z=zz)
    W = working_precision(P, len(pairs))
    raws = float_lattice_sums(to_big(mu.mu, W).value, pairs, exps, W, z=to_big(z, W).value)
    return [BigComplex(r, W) for r in raws]


def wp_nc(z, mu, d: SetDescriptor, P: int = DEFAULT_PRECISION, mode: str = "float"):
    """sum over d of (z - (m mu + n))^(-2), or POLE."""
    return _eval(z, mu, d, P, mode).wp


def wp_nc_prime(z, mu, d: SetDescriptor, P: int = DEFAULT_PRECISION, mode: str = "float"):
    """-2 * sum over d of (z - (m mu + n))^(-3), or POLE."""
    return _eval(z, mu, d, P, mode).wp_prime


def _eval(z, mu, d: SetDescriptor, P: int, mode: str, keep_working: bool = False) -> WeierstrassEval:
    mu = as_modulus(mu)
    pairs = enumerate_pairs(d)
    if _is_pole(z, mu, pairs):
        return WeierstrassEval(z, POLE, POLE, d, mu)
    s2, s3 = _wp_sums(z, mu, pairs, [-2, -3], P, mode)
    if mode == "exact":
        return WeierstrassEval(z, s2, s3 * -2, d, mu)
    with context(s3.prec):
        d3 = BigComplex(s3.value * -2, s3.prec)
    if not keep_working:
        s2, d3 = s2.round_to(P), d3.round_to(P)
    return WeierstrassEval(z, s2, d3, d, mu)


def evaluate(z, mu, d: SetDescriptor, P: int = DEFAULT_PRECISION, mode: str = "float") -> WeierstrassEval:
    return _eval(z, mu, d, P, mode)


def translation_identity_residual(z, shift: tuple[int, int], mu, d: SetDescriptor,
                                  P: int = DEFAULT_PRECISION, mode: str = "float"):
    """wp_F(z + m0 mu + n0) - wp_{F - (m0, n0)}(z); zero up to rounding.

    Shifting the argument by a lattice vector is the same as shifting the
    index set by its negative: both sides sum (z + lambda - gamma)^(-2).
    """
    mu = as_modulus(mu)
    m0, n0 = shift
    if mode == "exact":
        z_shift = z + (mu.mu * m0 + n0)
    else:
        W = working_precision(P, 1) + 8
        z_shift = to_big(z, W) + (to_big(mu.mu, W) * m0 + n0)
    lhs = _eval(z_shift, mu, d, P, mode, keep_working=True).wp
    rhs = _eval(z, mu, translate_set((-m0, -n0), d), P, mode, keep_working=True).wp
    if lhs is POLE or rhs is POLE:
        raise PoleEncountered(f"z = {z} meets a lattice point of the shifted set")
    if mode == "exact":
        return lhs - rhs
    prec = max(lhs.prec, rhs.prec)
    with context(prec):
        return BigComplex(to_big(lhs, prec).value - to_big(rhs, prec).value, prec).round_to(P)


def weier_residual(z, mu, d: SetDescriptor, P: int = DEFAULT_PRECISION, mode: str = "float",
                   g_descriptor: SetDescriptor | None = None):
    """E(wp_nc(z), wp_nc'(z)) with g-coefficients over ``g_descriptor``.

    ``g_descriptor`` defaults to d itself (the classical pairing); quantum
    runs pass the matching window.
    """
    mu = as_modulus(mu)
    ev = _eval(z, mu, d, P, mode, keep_working=True)
    if ev.wp is POLE:
        raise PoleEncountered(f"z = {z} is a lattice point of the descriptor")
    gd = d if g_descriptor is None else g_descriptor
    if mode == "exact":
        trip = g_triple(mu, gd, P, "exact")
        return WeierPoly.from_triple(trip)(ev.wp, ev.wp_prime)
    W = max(ev.wp.prec, P + 64)
    trip = g_triple(mu, gd, W, "float")
    poly = WeierPoly(*(to_big(v, W) for v in trip.values))
    res = poly(to_big(ev.wp, W), to_big(ev.wp_prime, W))
    return res.round_to(P)


@dataclass(frozen=True)
class ResidualSeries:
    scheme: SchemeId
    z: object
    stages: tuple[int, ...]
    sizes: tuple[int, ...]  # box radius or q_s per stage
    residuals: tuple[mpfr, ...]
    normalized: tuple[mpfr, ...] | None
    decay_exponent: float | None
    precision: int

    @property
    def points(self) -> list[tuple[int, mpfr]]:
        return list(zip(self.stages, self.residuals))


def _loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float | None:
    pts = [(math.log(x), math.log(y)) for x, y in zip(xs, ys) if x > 0 and y > 0]
    if len(pts) < 2:
        return None
    mx = sum(p[0] for p in pts) / len(pts)
    my = sum(p[1] for p in pts) / len(pts)
    sxx = sum((p[0] - mx) ** 2 for p in pts)
    sxy = sum((p[0] - mx) * (p[1] - my) for p in pts)
    return sxy / sxx if sxx else None


def residual_series(z, mu, scheme: SchemeId, stages: Sequence[int] | None = None,
                    P: int = DEFAULT_PRECISION) -> ResidualSeries:
    """Residual |E(wp, wp')| per stage of a summation scheme.

    Classical cones also get a log-log decay exponent against the box
    radius.  Quantum schemes additionally report the residual divided by
    max(|g2|^(3/2), |wp|^3).
    """
    mu = as_modulus(mu)
    stages = tuple(scheme.stages if stages is None else stages)
    residuals, normalized, sizes = [], [], []
    for s in stages:
        d = stage(scheme, s)
        ev = _eval(z, mu, d, P, "float", keep_working=True)
        if ev.wp is POLE:
            raise PoleEncountered(f"z = {z} is a lattice point at stage {s}")
        res = weier_residual(z, mu, d, P)
        residuals.append(abs(res))
        if isinstance(scheme, ClassicalCone):
            sizes.append(scheme.radii[s])
        else:
            sizes.append(min(abs(n) for _, n in enumerate_pairs(d)))
            trip = g_triple(mu, d, P)
            with context(P):
                scale = max(abs(trip.g2.value.value) ** mpfr(1.5), abs(ev.wp.value) ** 3)
                normalized.append(abs(res) / scale if scale else mpfr("inf"))
    exponent = None
    if isinstance(scheme, ClassicalCone):
        exponent = _loglog_slope(sizes, [float(r) for r in residuals])
    return ResidualSeries(scheme, z, stages, tuple(sizes), tuple(residuals),
                          tuple(normalized) if isinstance(scheme, QuantumTheta) else None,
                          exponent, P)


def slope_point(t, mu, theta, prec: int = DEFAULT_PRECISION):
    """z = t (1 + theta mu), exact when all inputs are exact."""
    mu = as_modulus(mu)
    if is_exact(t) and mu.exact and is_exact(theta):
        return exact_complex(t) * (exact_complex(1) + mu.mu * exact_complex(theta))
    W = prec + 16
    direction = BigComplex(1, W) + to_big(mu.mu, W) * to_big(theta, W)
    return (to_big(t, W) * direction).round_to(prec)
