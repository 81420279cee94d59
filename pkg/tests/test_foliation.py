import itertools
import random
from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qtj.errors import InputError, PrecisionExhausted
from qtj.foliation import (
    GL2Z,
    INFINITY,
    FoliationPoint,
    Modulus,
    act,
    canonicalize_sign,
    reduce_modulus,
    slope_direction,
)
from qtj.numerics import BigComplex, GaussianRational, QuadComplex, QuadIrr, exact_parts

I = GaussianRational(0, 1)
PHI = QuadIrr(1, 1, 2, 5)

UNIMODULAR = [m for m in itertools.product(range(-5, 6), repeat=4) if m[0] * m[3] - m[1] * m[2] in (1, -1)]
mats = st.sampled_from(UNIMODULAR).map(lambda m: GL2Z(*m))
moduli = st.tuples(st.fractions(-3, 3, max_denominator=9), st.fractions(Fraction(1, 9), 3, max_denominator=9),
                   st.booleans()).map(lambda t: Modulus(GaussianRational(t[0], t[1] if t[2] else -t[1])))
slopes = st.one_of(st.just(INFINITY), st.fractions(-5, 5, max_denominator=7),
                   st.integers(-3, 3).map(lambda a: QuadIrr(a, 1, 2, 5)))


def test_gl2z_validation():
    with pytest.raises(InputError):
        GL2Z(2, 0, 0, 1)
    A = GL2Z(2, 1, 1, 1)
    assert A @ A.inverse() == GL2Z.identity()
    assert A.inverse_transpose() == A.inverse().T


def test_slope_direction_examples():
    assert slope_direction(FoliationPoint(Modulus(I), 0)) == GaussianRational(1)
    assert slope_direction(FoliationPoint(Modulus(I), INFINITY)) == I
    d = slope_direction(FoliationPoint(Modulus(I), PHI))
    assert exact_parts(d) == (QuadIrr(1), PHI)


def test_act_examples():
    p = FoliationPoint(Modulus(I), PHI)
    assert act(GL2Z.identity(), p) == p
    q = act(GL2Z(-1, 0, 0, 1), p)
    assert q.modulus.mu == -I and q.theta == -PHI


@given(mats, mats, moduli, slopes)
def test_act_is_a_group_action(A, B, m, theta):
    p = FoliationPoint(m, theta)
    assert act(A, act(B, p)) == act(A @ B, p)


@given(mats, moduli, slopes)
def test_collinearity_invariant(A, m, theta):
    """(c mu' + d)(1 + theta mu) is a real multiple of 1 + theta' mu'."""
    if theta is INFINITY:
        return
    image = act(A.inverse(), FoliationPoint(m, theta))
    if image.theta is INFINITY:
        return
    mu2 = image.modulus.mu
    _, b, c, d = A.entries
    base = GaussianRational(1) if not isinstance(theta, QuadIrr) else QuadComplex(1)
    mu = m.mu if not isinstance(theta, QuadIrr) else QuadComplex.coerce(m.mu)
    lhs = (mu2 * c + d) * (base + mu * theta)
    rhs = slope_direction(image)
    # a real multiple: lhs * conj(rhs) has zero imaginary part
    assert exact_parts(lhs * rhs.conjugate())[1] == 0
    assert exact_parts(lhs / rhs)[0] == QuadIrr.coerce(theta * b + d)


def test_canonicalize_sign():
    assert canonicalize_sign(FoliationPoint(Modulus(I), PHI)) == FoliationPoint(Modulus(I), PHI)
    assert canonicalize_sign(FoliationPoint(Modulus(-I), -PHI)) == FoliationPoint(Modulus(I), PHI)
    assert canonicalize_sign(FoliationPoint(Modulus(-I), INFINITY)) == FoliationPoint(Modulus(I), INFINITY)


def _in_domain(mu) -> bool:
    re, im = exact_parts(mu)
    n2 = re * re + im * im
    return im > 0 and -Fraction(1, 2) < re <= Fraction(1, 2) and n2 >= 1 and not (n2 == 1 and re < 0)


def test_reduce_examples():
    assert reduce_modulus(Modulus(I)) == (Modulus(I), GL2Z.identity())
    m, M = reduce_modulus(Modulus(I + 5))
    assert m.mu == I and M == GL2Z(1, -5, 0, 1)
    m, M = reduce_modulus(Modulus(GaussianRational(0, Fraction(1, 2))))
    assert m.mu == GaussianRational(0, 2) and M.moebius(GaussianRational(0, Fraction(1, 2))) == m.mu


@given(moduli)
def test_reduce_properties(m):
    r, M = reduce_modulus(m)
    assert _in_domain(r.mu)
    image = M.moebius(m.mu)
    assert image == r.mu
    assert reduce_modulus(r) == (r, GL2Z.identity())


def test_reduce_float_boundary():
    mu = BigComplex.from_parts("0.5", "2", 128)
    with pytest.raises(PrecisionExhausted):
        reduce_modulus(Modulus(mu))
    r, _ = reduce_modulus(Modulus(mu), strict=False)
    assert abs(r.mu.real - gmpy2.mpfr("0.5")) < 1e-30


def test_random_matrix_sampler():
    rng = random.Random(7)
    for _ in range(50):
        A = GL2Z.random(rng, 5)
        assert A.det in (1, -1) and max(map(abs, A.entries)) <= 5


def test_modulus_must_be_nonreal():
    with pytest.raises(InputError):
        Modulus(GaussianRational(3, 0))
