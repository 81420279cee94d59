"""Lattice power-sum kernels shared by the Eisenstein and Weierstrass code.

Both kernels evaluate, for every requested exponent ``e``,

    sum over (m, n) of  (z - (m*mu + n)) ** e     (z = None means m*mu + n)

The float kernel works on raw ``gmpy2.mpc`` values at a caller-chosen working
precision and reduces in fixed chunks of ``CHUNK_SIZE`` terms, so the result
is bit-identical whether chunks run serially or in worker processes.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

import gmpy2
from gmpy2 import mpc

from .errors import PoleEncountered
from .numerics import CHUNK_SIZE, combine_chunks, context, pow_raw

Pair = tuple[int, int]


def _chunk_job(args) -> list[bytes]:
    mu_bits, z_bits, pairs, exps, prec = args
    mu = gmpy2.from_binary(mu_bits)
    z = gmpy2.from_binary(z_bits) if z_bits is not None else None
    sums = _chunk_sums_raw(mu, z, pairs, exps, prec)
    return [gmpy2.to_binary(s) for s in sums]


def _chunk_sums_raw(mu, z, pairs: Sequence[Pair], exps: Sequence[int], prec: int) -> list:
    need_inv = any(e < 0 for e in exps)
    with context(prec):
        accs = [mpc(0) for _ in exps]
        for m, n in pairs:
            w = m * mu + n
            if z is not None:
                w = z - w
            if need_inv:
                if gmpy2.is_zero(w):
                    raise PoleEncountered(f"lattice point ({m}, {n}) hits the evaluation point")
                inv = 1 / w
            for i, e in enumerate(exps):
                accs[i] = accs[i] + (pow_raw(inv, -e) if e < 0 else pow_raw(w, e))
    return accs


def float_lattice_sums(mu, pairs: Sequence[Pair], exps: Sequence[int], prec: int,
                       z=None, workers: int = 1) -> list:
    """Chunked fixed-order sums at working precision ``prec`` (raw mpc)."""
    chunks = [pairs[i:i + CHUNK_SIZE] for i in range(0, len(pairs), CHUNK_SIZE)]
    if workers > 1 and len(chunks) > 1:
        mu_bits = gmpy2.to_binary(mu)
        z_bits = gmpy2.to_binary(z) if z is not None else None
        jobs = [(mu_bits, z_bits, c, tuple(exps), prec) for c in chunks]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_chunk_job, jobs))
        per_chunk = [[gmpy2.from_binary(b) for b in r] for r in results]
    else:
        per_chunk = [_chunk_sums_raw(mu, z, c, exps, prec) for c in chunks]
    return [combine_chunks([pc[i] for pc in per_chunk], prec) for i in range(len(exps))]


def exact_lattice_sums(mu, pairs: Sequence[Pair], exps: Sequence[int], zero, z=None) -> list:
    """Exact sums over an exact complex type; ``zero`` is that type's 0."""
    accs = [zero for _ in exps]
    for m, n in pairs:
        w = mu * m + n
        if z is not None:
            w = z - w
        if w.is_zero() and any(e < 0 for e in exps):
            raise PoleEncountered(f"lattice point ({m}, {n}) hits the evaluation point")
        for i, e in enumerate(exps):
            accs[i] = accs[i] + w ** e
    return accs
