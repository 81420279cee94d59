"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import json
import random
import time
from fractions import Fraction

import mpmath
import pytest

from conftest import ACCEPTANCE_LINES
from qtj import cli
from qtj.dioph import convergent_table
from qtj.errors import PoleEncountered
from qtj.eisenstein import automorphy_residual, g_triple, partial_G, quantum_g_sequence
from qtj.foliation import GL2Z
from qtj.modular import c_invariants, j_classical, j_from_c, j_from_g, j_quantum, normal_form
from qtj.numerics import BigComplex, GaussianRational, QuadComplex, QuadIrr, embed_exact
from qtj.schemes import Box, QuantumWindow, min_abs_n
from qtj.weierstrass import translation_identity_residual, weier_residual

I = GaussianRational(0, 1)
PHI = QuadIrr(1, 1, 2, 5)
SQRT2 = QuadIrr.sqrt(2)


def verdict(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def test_criterion_01_exact_gaussian_suite():
    P = 256
    tol = 2.0 ** -(P - 40)
    worst = 0.0
    ok = True
    with Timer() as t:
        for N in range(0, 9):
            for k in (1, 3):
                ok &= partial_G(I, k, Box(N), mode="exact").value == 0
        ex = partial_G(I, 2, Box(1), mode="exact").value
        ok &= ex == GaussianRational(3)
        for N in range(1, 9):
            for k in (1, 2, 3):
                exact = partial_G(I, k, Box(N), mode="exact").value
                fl = partial_G(I, k, Box(N), P=P).value
                diff = abs(embed_exact(exact, P + 64).value - fl.value)
                worst = max(worst, float(diff))
    ok &= worst <= tol and t.elapsed < 5
    verdict(1, ok, f"G1=G3=0 for N<=8, G2(Box1)=3, float gap {worst:.2e} <= {tol:.2e}, {t.elapsed:.2f}s < 5s")


def test_criterion_02_finite_automorphy():
    P = 128
    rng = random.Random(20240601)
    mats = [GL2Z.random(rng, 5) for _ in range(20)]
    mus = [GaussianRational(0, 2), GaussianRational(Fraction(1, 2), 1)]
    worst = 0.0
    exact_ok = True
    with Timer() as t:
        for A in mats:
            for k in (1, 2, 3):
                for mu in mus:
                    exact_ok &= automorphy_residual(A, mu, k, Box(5), mode="exact") == 0
                    worst = max(worst, float(abs(automorphy_residual(A, mu, k, Box(5), P=P).value)))
    tol = 2.0 ** -(P - 64)
    ok = exact_ok and worst <= tol and t.elapsed < 10
    verdict(2, ok, f"exact residuals zero={exact_ok}, float max {worst:.2e} <= {tol:.2e}, {t.elapsed:.2f}s < 10s")


def test_criterion_03_c_invariant_identity():
    rng = random.Random(5)

    def rat():
        return Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**4))

    ok = True
    with Timer() as t:
        for _ in range(100):
            g1, g2, g3 = rat(), rat(), rat()
            c4, c6 = c_invariants(normal_form((g1, g2, g3)))
            ok &= (c4, c6) == (12 * g2, 216 * g3)
            ok &= j_from_c(c4, c6) == j_from_g(g2, g3)
    ok &= t.elapsed < 1
    verdict(3, ok, f"100 rational triples: c4=12g2, c6=216g3, j_from_c=j_from_g, {t.elapsed:.3f}s < 1s")


def test_criterion_04_j_at_i():
    with Timer() as t:
        res = j_classical(I, 50, P=256)
    err = abs(res.value.value - 1728)
    ok = err <= 1e-20 and res.error_bound <= 1e-20 and t.elapsed < 30
    verdict(4, ok, f"|j(i)-1728| = {float(err):.2e}, bound {float(res.error_bound):.2e}, {t.elapsed:.2f}s < 30s")


def test_criterion_05_hexagonal_point():
    rho = QuadComplex(Fraction(1, 2), QuadIrr(0, 1, 2, 3))
    with Timer() as t:
        res = j_classical(rho, 100, extrapolation_order=2)
    mag = abs(res.value.value)
    ok = mag <= 1e-6 and t.elapsed < 60
    verdict(5, ok, f"|j(rho)| = {float(mag):.2e} <= 1e-6 (bound {float(res.error_bound):.2e}), "
                   f"{t.elapsed:.2f}s < 60s")


def j_q_series(tau, terms=10):
    """Independent oracle: the first coefficients of the q-expansion of j."""
    coeffs = [1, 744, 196884, 21493760, 864299970, 20245856256, 333202640600, 4252023300096,
              44656994071935, 401490886656000][:terms]
    with mpmath.workdps(50):
        q = mpmath.exp(2j * mpmath.pi * tau)
        return sum(c * q ** (n - 1) for n, c in enumerate(coeffs))


def test_criterion_06_j_at_2i_against_q_series():
    with Timer() as t:
        res = j_classical(GaussianRational(0, 2), 400)
    oracle = complex(j_q_series(mpmath.mpc(0, 2)))
    err = abs(complex(res.value.value) - oracle)
    ok = err <= 1e-3 and t.elapsed < 180
    verdict(6, ok, f"|j(2i) - oracle| = {err:.2e} <= 1e-3 (j = {complex(res.value.value).real:.10f}), "
                   f"{t.elapsed:.2f}s < 180s")


def test_criterion_07_weierstrass_residual_decay():
    z = BigComplex.from_parts("0.31", "0.17", 128)
    with Timer() as t:
        r = [float(abs(weier_residual(z, I, Box(N)).value)) for N in (25, 50, 100)]
    ratios = (r[1] / r[0], r[2] / r[1])
    ok = r[0] > r[1] > r[2] and max(ratios) <= 0.7 and t.elapsed < 60
    verdict(7, ok, f"residuals {r[0]:.3e} > {r[1]:.3e} > {r[2]:.3e}, ratios {ratios[0]:.3f}, {ratios[1]:.3f} "
                   f"<= 0.7, {t.elapsed:.2f}s < 60s")


def test_criterion_08_translation_identity():
    rng = random.Random(8)
    mus = [I, GaussianRational(Fraction(1, 3), Fraction(5, 4)), GaussianRational(Fraction(-2, 7), 2)]
    done = 0
    ok = True
    with Timer() as t:
        while done < 50:
            z = GaussianRational(Fraction(rng.randint(-40, 40), rng.randint(1, 13)),
                                 Fraction(rng.randint(-40, 40), rng.randint(1, 13)))
            shift = (rng.randint(-4, 4), rng.randint(-4, 4))
            mu = rng.choice(mus)
            try:
                res = translation_identity_residual(z, shift, mu, Box(rng.randint(0, 5)), mode="exact")
            except PoleEncountered:  # draw again
                continue
            ok &= res == 0
            done += 1
    ok &= t.elapsed < 5
    verdict(8, ok, f"50 randomized exact cases all zero, {t.elapsed:.2f}s < 5s")


def test_criterion_09_quantum_decay():
    stages = range(5, 21)
    with Timer() as t:
        g2 = [abs(g_triple(I, QuantumWindow(PHI, s, 3)).g2.value.value) for s in stages]
        table = convergent_table(PHI, 25)
        first = next(s for s in stages if table[s].n >= 233)
        (single,) = quantum_g_sequence(I, PHI, 1, [5], 1, mode="exact")
    decreasing = all(b < a for a, b in zip(g2, g2[1:]))
    small = g2[first - 5] <= 1e-6
    oracle = GaussianRational(Fraction(-210, 54289), Fraction(-416, 54289))
    ok = decreasing and small and single.value == oracle and t.elapsed < 5
    verdict(9, ok, f"|g2| strictly decreasing s=5..20: {decreasing}, |g2(s={first})| = {float(g2[first - 5]):.2e} "
                   f"<= 1e-6, single window = {single.value}, {t.elapsed:.2f}s < 5s")


def test_criterion_10_disjointness_shadow():
    ok = True
    with Timer() as t:
        table = convergent_table(PHI, 40)
        prev = -1
        for s in range(35):
            m = min_abs_n(QuantumWindow(PHI, s, 3))
            ok &= m == table[s].n and m >= prev
            if table[s].n > 100:
                ok &= m > 100
            prev = m
    ok &= t.elapsed < 1
    verdict(10, ok, f"min|n| = q_s, nondecreasing, > 100 once q_s > 100 over 35 stages, {t.elapsed:.3f}s < 1s")


def test_criterion_11_reality_diagnostic():
    details = []
    ok = True
    with Timer() as t:
        for name, theta in (("phi", PHI), ("sqrt2", SQRT2)):
            rep = j_quantum(I, theta, range(8, 21), 3)
            fr = [float(x) for x in rep.im_fraction]
            tail = fr[-5:]
            ok &= fr[-1] <= 1e-2 and all(b <= a for a, b in zip(tail, tail[1:]))
            details.append(f"{name}: last {fr[-1]:.2e}")
    ok &= t.elapsed < 30
    verdict(11, ok, f"|Im j|/|j| <= 1e-2 and nonincreasing over last 5 stages ({'; '.join(details)}), "
                    f"{t.elapsed:.2f}s < 30s")


CLI_RUNS = [
    ["cf", "--theta", "quad:1:1:2:5", "--terms", "12"],
    ["eisenstein", "--mu", "1/3+5/4i", "--k", "2", "--set", "box:40"],
    ["automorphy", "--mu", "2i", "--k", "3", "--set", "box:20", "--matrix", "2,1,1,1"],
    ["jclass", "--mu", "1/2+3/2i", "--box-max", "64"],
    ["jquant", "--theta", "quad:0:1:1:2", "--mu", "i", "--stages", "6..12", "--window", "3"],
    ["weier-residual", "--mu", "i", "--z", "0.31+0.17i", "--scheme", "classical:8,16,32,64"],
    ["orbit", "--mu", "7/3+1/5i", "--theta", "quad:1:1:2:5", "--matrix", "0,-1,1,0"],
]


def _payload(argv, capsys) -> str:
    assert cli.run(argv) == 0
    env = json.loads(capsys.readouterr().out)
    return json.dumps(env["payload"], sort_keys=True)


def test_criterion_12_cli_determinism(capsys):
    ok = True
    with Timer() as t:
        for argv in CLI_RUNS:
            runs = [_payload(argv + ["--workers", w], capsys) for w in ("1", "1", "3")]
            ok &= len(set(runs)) == 1
    ok &= t.elapsed < 120
    verdict(12, ok, f"{len(CLI_RUNS)} subcommands x (2 runs + workers=3) byte-identical payloads, "
                    f"{t.elapsed:.2f}s < 120s")
