"""Finite subsets of Z^2 and the staged families built from them.

A :class:`SetDescriptor` is a rule, not a list: enumeration produces the
pairs on demand, duplicate-free and in lexicographic order.  Summation
schemes (:class:`ClassicalCone`, :class:`QuantumTheta`) hand out one
descriptor per stage.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .dioph import convergent_table
from .errors import EmptySet, InputError
from .foliation import GL2Z
from .numerics import QuadIrr

Pair = tuple[int, int]


@dataclass(frozen=True)
class Box:
    """{(m, n): |m|, |n| <= N}."""

    N: int
    include_origin: bool = True

    def __post_init__(self):
        if self.N < 0:
            raise InputError(f"box radius must be >= 0, got {self.N}")


@dataclass(frozen=True)
class QuantumWindow:
    """{+-(p_j, q_j): start <= j < start + length} for convergents of theta.

    ``enrich`` adds the depth-1 sums of adjacent convergents inside the
    window, +-(p_j + p_{j+1}, q_j + q_{j+1}).
    """

    theta: QuadIrr
    start: int
    length: int
    with_negation: bool = True
    enrich: bool = False

    def __post_init__(self):
        if self.start < 0 or self.length < 1:
            raise InputError(f"window needs start >= 0 and length >= 1, got {self.start}, {self.length}")


@dataclass(frozen=True)
class Explicit:
    pairs: tuple[Pair, ...]

    def __init__(self, pairs):
        object.__setattr__(self, "pairs", tuple((int(m), int(n)) for m, n in pairs))


@dataclass(frozen=True)
class Transformed:
    A: GL2Z
    inner: "SetDescriptor"


@dataclass(frozen=True)
class Translated:
    shift: Pair
    inner: "SetDescriptor"


SetDescriptor = Union[Box, QuantumWindow, Explicit, Transformed, Translated]


def _box_pairs(d: Box) -> list[Pair]:
    N = d.N
    rng = range(-N, N + 1)
    if d.include_origin:
        return [(m, n) for m in rng for n in rng]
    return [(m, n) for m in rng for n in rng if m or n]


def _window_pairs(d: QuantumWindow) -> list[Pair]:
    table = convergent_table(d.theta, d.start + d.length)
    conv = [table[j].pair for j in range(d.start, d.start + d.length)]
    pts = list(conv)
    if d.enrich:
        pts += [(p1 + p2, q1 + q2) for (p1, q1), (p2, q2) in zip(conv, conv[1:])]
    if d.with_negation:
        pts += [(-m, -n) for m, n in pts]
    return sorted(set(pts))


def enumerate_pairs(d: SetDescriptor) -> list[Pair]:
    """Deterministic, duplicate-free, lexicographically sorted enumeration."""
    if isinstance(d, Box):
        return _box_pairs(d)
    if isinstance(d, QuantumWindow):
        return _window_pairs(d)
    if isinstance(d, Explicit):
        return sorted(set(d.pairs))
    if isinstance(d, Transformed):
        return sorted(d.A.apply_vector(m, n) for m, n in enumerate_pairs(d.inner))
    if isinstance(d, Translated):
        m0, n0 = d.shift
        return [(m + m0, n + n0) for m, n in enumerate_pairs(d.inner)]
    raise InputError(f"unknown descriptor {d!r}")


# public alias; a function called ``enumerate`` would shadow the builtin here
enumerate_set = enumerate_pairs


def cardinality(d: SetDescriptor) -> int:
    if isinstance(d, Box):
        side = 2 * d.N + 1
        return side * side - (0 if d.include_origin else 1)
    if isinstance(d, (Transformed, Translated)):
        return cardinality(d.inner)
    return len(enumerate_pairs(d))


def contains_origin(d: SetDescriptor) -> bool:
    if isinstance(d, Box):
        return d.include_origin
    if isinstance(d, Transformed):
        return contains_origin(d.inner)
    return (0, 0) in set(enumerate_pairs(d))


def transform_set(A: GL2Z, d: SetDescriptor) -> SetDescriptor:
    """Descriptor enumerating {A (m, n)^T : (m, n) in d}."""
    if A.entries == (1, 0, 0, 1):
        return d
    if isinstance(d, Transformed):
        return Transformed(A @ d.A, d.inner)
    return Transformed(A, d)


def translate_set(shift: Pair, d: SetDescriptor) -> SetDescriptor:
    if isinstance(d, Translated):
        return Translated((shift[0] + d.shift[0], shift[1] + d.shift[1]), d.inner)
    return Translated(tuple(shift), d)


def min_abs_n(d: SetDescriptor) -> int:
    """min |n| over the nonzero pairs of d."""
    ns = [abs(n) for m, n in enumerate_pairs(d) if m or n]
    if not ns:
        raise EmptySet(f"{d!r} has no nonzero pairs")
    return min(ns)


@dataclass(frozen=True)
class ClassicalCone:
    """Nested boxes Box(N_s); ``radii[s]`` is the stage-s radius."""

    radii: tuple[int, ...]

    def __init__(self, radii):
        radii = tuple(int(r) for r in radii)
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise InputError(f"radii must be strictly increasing: {radii}")
        object.__setattr__(self, "radii", radii)

    @classmethod
    def dyadic(cls, top: int) -> "ClassicalCone":
        return cls(tuple(2**s for s in range(top + 1)))

    @property
    def stages(self) -> tuple[int, ...]:
        return tuple(range(len(self.radii)))


@dataclass(frozen=True)
class QuantumTheta:
    """Windows of L consecutive convergents of theta starting at each stage."""

    theta: QuadIrr
    L: int
    stages: tuple[int, ...]

    def __init__(self, theta, L, stages):
        stages = tuple(int(s) for s in stages)
        if any(b <= a for a, b in zip(stages, stages[1:])):
            raise InputError(f"stages must be strictly increasing: {stages}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "L", int(L))
        object.__setattr__(self, "stages", stages)


SchemeId = Union[ClassicalCone, QuantumTheta]


def stage(sch: SchemeId, s: int) -> SetDescriptor:
    if s not in sch.stages:
        raise InputError(f"stage {s} not in {sch.stages}")
    if isinstance(sch, ClassicalCone):
        return Box(sch.radii[s], include_origin=True)
    return QuantumWindow(sch.theta, s, sch.L, with_negation=True)


def describe(d: SetDescriptor) -> str:
    """CLI text form of a descriptor (inverse of ``parsing.parse_set``)."""
    if isinstance(d, Box):
        return f"box:{d.N}" if d.include_origin else f"box0:{d.N}"
    if isinstance(d, QuantumWindow):
        return f"qwin:{d.start}:{d.length}"
    if isinstance(d, Explicit):
        return "explicit:" + ";".join(f"{m},{n}" for m, n in d.pairs)
    if isinstance(d, Transformed):
        a, b, c, e = d.A.entries
        return f"T[{a},{b},{c},{e}]:" + describe(d.inner)
    if isinstance(d, Translated):
        return f"shift[{d.shift[0]},{d.shift[1]}]:" + describe(d.inner)
    raise InputError(f"unknown descriptor {d!r}")
