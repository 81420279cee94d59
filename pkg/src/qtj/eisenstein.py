"""Partial Eisenstein sums over finite index sets.

``partial_G(mu, k, F)`` is the sum of (m*mu + n)**(-2k) over the nonzero
pairs of F.  The weight index k follows the exponent -2k, so k = 2 is the
classical weight-4 series and ``g2 = 60*G_2``, ``g3 = 140*G_3``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import gmpy2
from gmpy2 import mpc, mpfr

from .errors import ExactModeUnavailable, InputError
from .foliation import GL2Z, Modulus, as_modulus
from .kernels import exact_lattice_sums, float_lattice_sums
from .numerics import (
    BigComplex,
    GaussianRational,
    QuadComplex,
    context,
    is_exact,
    pow_raw,
    to_big,
    working_precision,
)
from .schemes import Box, QuantumWindow, SetDescriptor, cardinality, enumerate_pairs, transform_set

DEFAULT_PRECISION = 128
NORMALIZATION = {1: 1, 2: 60, 3: 140}


@dataclass(frozen=True)
class PartialSum:
    value: object  # BigComplex (float mode) or exact complex
    k: int
    mu: Modulus
    descriptor: SetDescriptor
    term_count: int
    mode: str
    precision: int
    error_bound: object = None  # mpfr rounding bound, float mode only
    normalization: int = 1

    @property
    def weight(self) -> int:
        """Classical weight 2k."""
        return 2 * self.k


@dataclass(frozen=True)
class EisTriple:
    g1: PartialSum
    g2: PartialSum
    g3: PartialSum

    @property
    def values(self) -> tuple:
        return (self.g1.value, self.g2.value, self.g3.value)


def _check_mode(mode: str) -> str:
    if mode not in ("exact", "float"):
        raise InputError(f"mode must be 'exact' or 'float', got {mode!r}")
    return mode


def _exact_zero(mu):
    return QuadComplex(0) if isinstance(mu, QuadComplex) else GaussianRational(0)


def nonzero_pairs(d: SetDescriptor) -> list[tuple[int, int]]:
    if isinstance(d, Box):
        return enumerate_pairs(Box(d.N, include_origin=False))
    return [p for p in enumerate_pairs(d) if p != (0, 0)]


def lattice_constant(mu) -> float:
    """Lower bound c with |m*mu + n| >= c * max(|m|, |n|) for all integers."""
    z = complex(to_big(mu, 64)) if not isinstance(mu, complex) else mu
    re, im = z.real, abs(z.imag)
    edge_x = math.hypot(im, max(0.0, abs(re) - 1.0))
    a2 = re * re + im * im
    x = max(-1.0, min(1.0, -re / a2))
    edge_y = math.sqrt(max(a2 * x * x + 2 * re * x + 1, 0.0))
    # shave a relative 1e-9 so float evaluation never overstates the bound
    return min(edge_x, edge_y) * (1 - 1e-9)


def abs_sum_bound(mu, pairs: Sequence[tuple[int, int]], k: int, d: SetDescriptor | None = None) -> float:
    """Upper bound for sum |m*mu + n|^(-2k) over the given nonzero pairs."""
    c = lattice_constant(mu)
    if isinstance(d, Box) and k >= 1:
        shells = sum(8 * r * float(r) ** (-2 * k) for r in range(1, d.N + 1))
        return shells * c ** (-2 * k)
    return sum((c * max(abs(m), abs(n))) ** (-2 * k) for m, n in pairs if m or n)


def rounding_bound(value_abs, abs_sum: float, count: int, k: int, work_prec: int, prec: int) -> mpfr:
    """Rounding error of a float-mode sum: per-term ops at the working
    precision plus the final rounding to ``prec``."""
    with context(64, gmpy2.RoundUp):
        per_term = mpfr(count + 4 * abs(k) + 8) * gmpy2.exp2(-work_prec)
        return mpfr(abs_sum) * per_term + mpfr(value_abs) * gmpy2.exp2(1 - prec)


def _float_sums(mu: Modulus, ks: Sequence[int], pairs, work_prec: int, workers: int) -> list:
    mu_raw = to_big(mu.mu, work_prec).value
    return float_lattice_sums(mu_raw, pairs, [-2 * k for k in ks], work_prec, workers=workers)


def partial_G(mu, k: int, d: SetDescriptor, P: int = DEFAULT_PRECISION, mode: str = "float",
              workers: int = 1) -> PartialSum:
    """Sum of (m mu + n)^(-2k) over the nonzero pairs of d.

    k = 0 returns the cardinality of d (origin included); negative k gives
    sums of positive powers.
    """
    mu = as_modulus(mu)
    _check_mode(mode)
    if mode == "exact" and not mu.exact:
        raise ExactModeUnavailable(f"modulus {mu} is not exactly representable")
    if k == 0:
        count = cardinality(d)
        value = GaussianRational(count) if mode == "exact" else BigComplex(count, P)
        return PartialSum(value, 0, mu, d, count, mode, P, mpfr(0) if mode == "float" else None)
    pairs = nonzero_pairs(d)
    if mode == "exact":
        (value,) = exact_lattice_sums(mu.mu, pairs, [-2 * k], _exact_zero(mu.mu))
        return PartialSum(value, k, mu, d, len(pairs), mode, P)
    W = working_precision(P, len(pairs))
    (raw,) = _float_sums(mu, [k], pairs, W, workers)
    value = BigComplex(raw, W).round_to(P)
    bound = rounding_bound(abs(raw), abs_sum_bound(mu.mu, pairs, k, d), len(pairs), k, W, P)
    return PartialSum(value, k, mu, d, len(pairs), mode, P, bound)


def partial_G_multi(mu, ks: Sequence[int], d: SetDescriptor, P: int = DEFAULT_PRECISION,
                    mode: str = "float", workers: int = 1, keep_working: bool = False) -> list[PartialSum]:
    """Several weights over one pass of the descriptor.

    Values equal the corresponding single-k ``partial_G`` results bit for
    bit.  With ``keep_working`` the float values stay at working precision.
    """
    mu = as_modulus(mu)
    _check_mode(mode)
    if any(k == 0 for k in ks):
        raise InputError("use partial_G for k = 0")
    pairs = nonzero_pairs(d)
    if mode == "exact":
        if not mu.exact:
            raise ExactModeUnavailable(f"modulus {mu} is not exactly representable")
        vals = exact_lattice_sums(mu.mu, pairs, [-2 * k for k in ks], _exact_zero(mu.mu))
        return [PartialSum(v, k, mu, d, len(pairs), mode, P) for v, k in zip(vals, ks)]
    W = working_precision(P, len(pairs))
    raws = _float_sums(mu, ks, pairs, W, workers)
    out = []
    for raw, k in zip(raws, ks):
        value = BigComplex(raw, W)
        if not keep_working:
            value = value.round_to(P)
        bound = rounding_bound(abs(raw), abs_sum_bound(mu.mu, pairs, k, d), len(pairs), k, W, P)
        out.append(PartialSum(value, k, mu, d, len(pairs), mode, value.prec, bound))
    return out


def _scaled(ps: PartialSum, factor: int) -> PartialSum:
    if ps.mode == "exact":
        value = ps.value * factor
        bound = None
    else:
        value = ps.value * BigComplex(factor, ps.value.prec)
        with context(64, gmpy2.RoundUp):
            bound = ps.error_bound * factor + mpfr(abs(value.value)) * gmpy2.exp2(1 - ps.value.prec)
    return PartialSum(value, ps.k, ps.mu, ps.descriptor, ps.term_count, ps.mode, ps.precision,
                      bound, normalization=factor)


def g_triple(mu, d: SetDescriptor, P: int = DEFAULT_PRECISION, mode: str = "float",
             workers: int = 1) -> EisTriple:
    """(g1, g2, g3) = (G_1, 60 G_2, 140 G_3) over the nonzero pairs of d."""
    G1, G2, G3 = partial_G_multi(mu, [1, 2, 3], d, P, mode, workers)
    return EisTriple(G1, _scaled(G2, 60), _scaled(G3, 140))


def automorphy_factor(A: GL2Z, mu, k: int, prec: int | None = None):
    """(c mu + d)^(-2k), exact for exact mu."""
    a, b, c, dd = A.entries
    if prec is None:
        return (mu * c + dd) ** (-2 * k)
    return to_big(mu * c + dd if is_exact(mu) else to_big(mu, prec) * c + dd, prec) ** (-2 * k)


def automorphy_residual(A: GL2Z, mu, k: int, d: SetDescriptor, P: int = DEFAULT_PRECISION,
                        mode: str = "float", workers: int = 1):
    """(c mu + d)^(-2k) G_k(A mu)_F - G_k(mu)_{A^T F}.

    Identically zero as a finite sum; in float mode the value measures
    rounding only.  For det A = -1 the factor differs from A'(mu)^k by
    (-1)^k.
    """
    mu = as_modulus(mu)
    _check_mode(mode)
    A_mu = A.moebius(mu.mu)
    moved = transform_set(A.T, d)
    if mode == "exact":
        if not mu.exact:
            raise ExactModeUnavailable(f"modulus {mu} is not exactly representable")
        lhs = automorphy_factor(A, mu.mu, k) * partial_G(A_mu, k, d, P, "exact").value
        rhs = partial_G(mu, k, moved, P, "exact").value
        return lhs - rhs
    count = max(cardinality(d), 1)
    W = working_precision(P, count) + 16
    mu_w = to_big(mu.mu, W)
    A_mu_w = A.moebius(mu_w) if not mu.exact else to_big(A_mu, W)
    (lhs_sum,) = _float_sums(Modulus(A_mu_w), [k], nonzero_pairs(d), W, workers)
    (rhs_sum,) = _float_sums(Modulus(mu_w), [k], nonzero_pairs(moved), W, workers)
    a, b, c, dd = A.entries
    with context(W):
        factor = 1 / (mu_w.value * c + dd)
        res = pow_raw(factor, 2 * k) * lhs_sum - rhs_sum
    return BigComplex(res, W).round_to(P)


# ---------------------------------------------------------------------------
# classical limits


@dataclass(frozen=True)
class ClassicalG:
    estimate: BigComplex
    error_bound: mpfr
    k: int
    radii: tuple[int, ...]
    partials: tuple[BigComplex, ...]
    symmetric_zero: bool = False
    extrapolation_order: int = 2
    flags: tuple[str, ...] = field(default=())

    def __iter__(self):
        yield self.estimate
        yield self.error_bound


def tail_bound(mu, k: int, N: int) -> float:
    """Integral bound for the sum over pairs outside Box(N), k >= 2."""
    c = lattice_constant(mu)
    return 8.0 * c ** (-2 * k) * float(N) ** (2 - 2 * k) / (2 * k - 2)


def richardson(radii: Sequence[int], values: Sequence, exps: Sequence[int], prec: int):
    """Limit of S(N) = S + sum_j a_j h^{exps[j]} with h = 1/(N + 1/2).

    Solves the square linear system exactly in the model by Gaussian
    elimination at ``prec`` bits.
    """
    n = len(radii)
    if len(exps) != n - 1:
        raise InputError("need len(exps) == len(radii) - 1")
    with context(prec):
        hs = [1 / (mpfr(r) + mpfr(0.5)) for r in radii]
        rows = [[mpc(1)] + [mpc(h ** e) for e in exps] + [mpc(v)] for h, v in zip(hs, values)]
        for col in range(n):
            piv = max(range(col, n), key=lambda r: abs(rows[r][col]))
            rows[col], rows[piv] = rows[piv], rows[col]
            for r in range(n):
                if r != col:
                    f = rows[r][col] / rows[col][col]
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
        return rows[0][n] / rows[0][0]


def classical_G_details(mu, k: int, N_max: int, P: int = DEFAULT_PRECISION,
                        extrapolation_order: int = 2, workers: int = 1, ks_extra=()) -> dict[int, ClassicalG]:
    """Box partial sums at N_max / 2^j (j = order..0) plus extrapolation.

    Returns one :class:`ClassicalG` per weight in ``(k, *ks_extra)``; all
    share one pass over each box.
    """
    mu = as_modulus(mu)
    ks = [k, *ks_extra]
    if min(ks) < 2:
        raise InputError("classical limits need k >= 2; G_1 is shape-dependent")
    order = extrapolation_order
    if order < 0 or N_max < 2 ** order:
        raise InputError(f"N_max = {N_max} too small for extrapolation order {order}")
    radii = tuple(N_max >> j for j in range(order, -1, -1))
    W = working_precision(P, (2 * N_max + 1) ** 2) + 16
    partials = {kk: [] for kk in ks}
    bounds = {kk: [] for kk in ks}
    for r in radii:
        sums = partial_G_multi(mu, ks, Box(r, include_origin=False), P, "float", workers,
                               keep_working=True)
        for ps in sums:
            partials[ps.k].append(ps.value)
            bounds[ps.k].append(ps.error_bound)
    out = {}
    for kk in ks:
        vals = [v.value for v in partials[kk]]
        exps = [2 * kk - 2 + 2 * j for j in range(order)]
        est_raw = richardson(radii, vals, exps, W) if order else vals[-1]
        estimate = BigComplex(est_raw, W).round_to(P)
        symmetric = mu.is_square() and kk % 2 == 1
        with context(64, gmpy2.RoundUp):
            rnd = max(bounds[kk]) * mpfr(4 ** order) + mpfr(abs(estimate.value)) * gmpy2.exp2(1 - P)
            if symmetric:
                # every box sum vanishes identically, so the limit is exactly 0
                bound = rnd + mpfr(abs(estimate.value))
            else:
                # |S - est| <= |S - S(N_max)| + |S(N_max) - est|
                shift = abs(estimate.value - partials[kk][-1].round_to(P).value)
                bound = rnd + mpfr(tail_bound(mu.mu, kk, N_max)) + mpfr(shift)
        flags = ("square-lattice odd weight: box sums vanish identically",) if symmetric else ()
        out[kk] = ClassicalG(estimate, bound, kk, radii,
                             tuple(v.round_to(P) for v in partials[kk]), symmetric, order, flags)
    return out


def classical_G(mu, k: int, N_max: int, P: int = DEFAULT_PRECISION, extrapolation_order: int = 2,
                workers: int = 1) -> tuple[BigComplex, mpfr]:
    """(estimate, error_bound) for the classical G_k(mu), k >= 2."""
    res = classical_G_details(mu, k, N_max, P, extrapolation_order, workers)[k]
    return res.estimate, res.error_bound


# ---------------------------------------------------------------------------
# quantum windows


def quantum_g_sequence(mu, theta, k: int, stages: Sequence[int], L: int, P: int = DEFAULT_PRECISION,
                       mode: str = "float", workers: int = 1) -> list[PartialSum]:
    """G_k over the windows QuantumWindow(theta, s, L), s in stages."""
    if k < 1:
        raise InputError("quantum sequences need k >= 1")
    if theta.is_rational:
        raise InputError("theta must be irrational")
    return [partial_G(mu, k, QuantumWindow(theta, s, L), P, mode, workers) for s in stages]
