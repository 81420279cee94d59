"""Normal form of the Weierstrass cubic, c-invariants and j pipelines.

Substituting Y -> 2y into E(X, Y) and dividing by 4 gives the normal form
y^2 = X^3 + a2 X^2 + a4 X + a6 with

    a2 = -3 g1,   a4 = 3 g1^2 - g2/4,   a6 = -(g1^3 - g1 g2/4 + g3/4).

The c-invariants of that form do not see g1 at all: c4 = 12 g2 and
c6 = 216 g3, so j reduces to 1728 g2^3 / (g2^3 - 27 g3^2).
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import gmpy2
from gmpy2 import mpfr

from .dioph import cf_expand
from .eisenstein import DEFAULT_PRECISION, EisTriple, classical_G_details, partial_G_multi
from .errors import DegenerateDiscriminant, InputError, ZeroDenominator
from .foliation import GL2Z, Modulus, as_modulus, reduce_modulus
from .numerics import Ball, BigComplex, QuadIrr, context
from .schemes import QuantumWindow, min_abs_n


@dataclass(frozen=True)
class NormalForm:
    a2: object
    a4: object
    a6: object


def _values(t) -> tuple:
    vals = t.values if isinstance(t, EisTriple) else tuple(t)
    # plain integers would drift into float division below
    return tuple(Fraction(v) if isinstance(v, int) else v for v in vals)


def normal_form(t) -> NormalForm:
    """Normal-form coefficients from an EisTriple or a plain (g1, g2, g3)."""
    g1, g2, g3 = _values(t)
    a2 = g1 * -3
    a4 = g1 * g1 * 3 - g2 / 4
    a6 = -(g1 * g1 * g1 - g1 * g2 / 4 + g3 / 4)
    return NormalForm(a2, a4, a6)


def c_invariants(nf: NormalForm) -> tuple:
    b2 = nf.a2 * 4
    c4 = b2 * b2 - nf.a4 * 48
    c6 = -(b2 * b2 * b2) + b2 * nf.a4 * 72 - nf.a6 * 864
    return c4, c6


def _is_zero(x) -> bool:
    if isinstance(x, BigComplex):
        return x.is_zero()
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return x == 0


def j_from_c(c4, c6):
    """1728 c4^3 / (c4^3 - c6^2)."""
    c4, c6 = _values((c4, c6))
    num = c4 * c4 * c4
    den = num - c6 * c6
    if _is_zero(den):
        raise DegenerateDiscriminant("c4^3 = c6^2")
    return num * 1728 / den


def j_from_g(g2, g3):
    """1728 g2^3 / (g2^3 - 27 g3^2); equals j_from_c(12 g2, 216 g3)."""
    g2, g3 = _values((g2, g3))
    num = g2 * g2 * g2
    den = num - g3 * g3 * 27
    if _is_zero(den):
        raise DegenerateDiscriminant("g2^3 = 27 g3^2")
    return num * 1728 / den


def _j_ball(g2: Ball, g3: Ball) -> Ball:
    """j over balls, in whichever algebraic form keeps the radius small."""
    cube = g2 * g2 * g2
    sq27 = (g3 * g3).scale(27)
    one = Ball(BigComplex(1, g2.prec))
    if abs(cube.mid) >= abs(sq27.mid):
        # near j = 1728 the ratio g3^2/g2^3 is tiny and well conditioned
        return one.scale(1728) / (one - sq27 / cube)
    return cube.scale(1728) / (cube - sq27)


@dataclass(frozen=True)
class JClassical:
    value: BigComplex
    error_bound: mpfr
    mu: Modulus
    reduced_mu: Modulus
    reducer: GL2Z
    N_max: int
    precision: int
    extrapolation_order: int
    g2: BigComplex
    g3: BigComplex
    flags: tuple[str, ...] = field(default=())

    def __iter__(self):
        yield self.value
        yield self.error_bound


def j_classical(mu, N_max: int, P: int = DEFAULT_PRECISION, extrapolate: bool = True,
                reduce: bool = True, workers: int = 1, extrapolation_order: int = 2) -> JClassical:
    """j(mu) from extrapolated box limits of G_2 and G_3 with an error bound.

    The modulus is first moved into the standard fundamental domain, which
    leaves j unchanged and makes the box sums converge fastest.
    """
    mu = as_modulus(mu)
    reduced, M = reduce_modulus(mu, strict=False) if reduce else (mu, GL2Z.identity())
    order = extrapolation_order if extrapolate else 0
    W = P + 32
    res = classical_G_details(reduced, 2, N_max, W, order, workers, ks_extra=(3,))
    g2 = Ball(res[2].estimate, res[2].error_bound).scale(60)
    g3 = Ball(res[3].estimate, res[3].error_bound).scale(140)
    flags = res[2].flags + res[3].flags
    try:
        jb = _j_ball(g2, g3)
        value, rad = jb.mid, jb.rad
    except ZeroDenominator:
        value = j_from_g(g2.mid, g3.mid)
        rad = mpfr("inf")
        flags += ("error ball contains the discriminant zero",)
    out = value.round_to(P)
    with context(64, gmpy2.RoundUp):
        bound = rad + mpfr(abs(out.value)) * gmpy2.exp2(1 - P)
    return JClassical(out, bound, mu, reduced, M, N_max, P, order,
                      g2.mid.round_to(P), g3.mid.round_to(P), flags)


# ---------------------------------------------------------------------------
# quantum j


@dataclass(frozen=True)
class ClassSummary:
    cls: int | None
    stages: tuple[int, ...]
    median: BigComplex | None
    diameter: mpfr


@dataclass(frozen=True)
class JReport:
    mu: Modulus
    theta: QuadIrr
    L: int
    precision: int
    stages: tuple[int, ...]
    q: tuple[int, ...]  # min |n| over each window
    j_values: tuple[BigComplex | None, ...]
    im_fraction: tuple[mpfr | None, ...]
    classes: tuple[int | None, ...]
    period: tuple[int, int] | None
    summaries: tuple[ClassSummary, ...]
    reality_expected: bool
    flags: tuple[tuple[int, str], ...] = field(default=())

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.stages, self.stages[1:])):
            raise InputError("JReport stages must be strictly increasing")
        if any(s.diameter < 0 for s in self.summaries):
            raise InputError("diameters must be nonnegative")

    @property
    def rows(self) -> list[tuple]:
        return list(zip(self.stages, self.j_values, self.im_fraction, self.classes))


def _period_class(s: int, period) -> int | None:
    if period is None:
        return None
    pre, per = period
    return None if s < pre else (s - pre) % per


def _median(vals: Sequence[BigComplex], prec: int) -> BigComplex:
    with context(prec):
        re = statistics.median(v.real for v in vals)
        im = statistics.median(v.imag for v in vals)
    return BigComplex.from_parts(re, im, prec)


def _diameter(vals: Sequence[BigComplex], prec: int) -> mpfr:
    best = mpfr(0)
    with context(prec):
        for i, u in enumerate(vals):
            for v in vals[i + 1:]:
                best = max(best, abs(u.value - v.value))
    return best


def _summaries(stages, classes, j_values, prec) -> tuple[ClassSummary, ...]:
    groups: dict = {}
    for s, c, j in zip(stages, classes, j_values):
        if j is not None:
            groups.setdefault(c, []).append((s, j))
    order = sorted(groups, key=lambda c: (c is None, c if c is not None else 0))
    out = []
    for c in order:
        ss = tuple(s for s, _ in groups[c])
        vals = [j for _, j in groups[c]]
        out.append(ClassSummary(c, ss, _median(vals, prec), _diameter(vals, prec)))
    return tuple(out)


def j_quantum(mu, theta: QuadIrr, stages: Sequence[int], L: int, P: int = DEFAULT_PRECISION,
              workers: int = 1) -> JReport:
    """Per-stage j from g2, g3 over the windows QuantumWindow(theta, s, L).

    A stage whose discriminant vanishes is flagged and carries no value.
    """
    mu = as_modulus(mu)
    if not isinstance(theta, QuadIrr) or theta.is_rational:
        raise InputError("theta must be an irrational QuadIrr")
    stages = tuple(int(s) for s in stages)
    if any(b <= a for a, b in zip(stages, stages[1:])):
        raise InputError(f"stages must be strictly increasing: {stages}")
    period = cf_expand(theta, max(stages, default=0) + L + 1).period
    W = P + 32
    js, fracs, qs, flags = [], [], [], []
    for s in stages:
        window = QuantumWindow(theta, s, L)
        qs.append(min_abs_n(window))
        G2, G3 = partial_G_multi(mu, [2, 3], window, W, "float", workers)
        try:
            j = j_from_g(G2.value * 60, G3.value * 140).round_to(P)
        except DegenerateDiscriminant as exc:
            js.append(None)
            fracs.append(None)
            flags.append((s, str(exc)))
            continue
        js.append(j)
        with context(P):
            fracs.append(abs(j.imag) / abs(j.value) if not j.is_zero() else mpfr(0))
    classes = tuple(_period_class(s, period) for s in stages)
    return JReport(mu, theta, L, P, stages, tuple(qs), tuple(js), tuple(fracs), classes, period,
                   _summaries(stages, classes, js, P), mu.is_square(), tuple(flags))

