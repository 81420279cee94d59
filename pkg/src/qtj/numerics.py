"""Exact and arbitrary-precision arithmetic.

Exact types
    ``Rational`` (``fractions.Fraction``), :class:`QuadIrr` for real quadratic
    irrationals ``(a + b*sqrt(d))/c``, :class:`GaussianRational` and
    :class:`QuadComplex` (complex numbers whose parts lie in one real
    quadratic field).

Floating type
    :class:`BigComplex`, a thin wrapper over ``gmpy2.mpc`` carrying its
    precision in bits.  Every operation rounds to nearest at that precision,
    so replaying an operation sequence reproduces the same bits.

Summation uses a fixed chunked order (:func:`sum_fixed_order`) so results do
not depend on how many workers produced the chunks.
"""

from __future__ import annotations

import math
import operator
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import gmpy2
from gmpy2 import mpc, mpfr

from .errors import InputError, PrecisionMismatch, ZeroDenominator, ZeroToNegativePower

Rational = Fraction

CHUNK_SIZE = 4096
BASE_GUARD_BITS = 32
MIN_PRECISION = 64


def guard_bits(term_count: int) -> int:
    """Guard bits used internally for a sum of ``term_count`` terms."""
    return BASE_GUARD_BITS + max(term_count - 1, 0).bit_length()


def working_precision(prec: int, term_count: int) -> int:
    return prec + guard_bits(term_count)


def context(prec: int, round_mode=gmpy2.RoundToNearest):
    """A gmpy2 context usable as ``with context(P): ...``."""
    return gmpy2.context(precision=prec, round=round_mode)


# ---------------------------------------------------------------------------
# integer helpers


@lru_cache(maxsize=1024)
def _square_split(d: int) -> tuple[int, int]:
    """Return (f, s) with d = f*f*s and s squarefree."""
    f, s = 1, d
    p = 2
    while p * p <= s:
        while s % (p * p) == 0:
            s //= p * p
            f *= p
        p += 1 if p == 2 else 2
    return f, s


def is_squarefree(d: int) -> bool:
    return d >= 1 and _square_split(d)[0] == 1


def _as_fraction(x) -> Fraction | None:
    if isinstance(x, bool):
        return None
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    return None


# ---------------------------------------------------------------------------
# QuadIrr


class QuadIrr:
    """The real number ``(a + b*sqrt(d)) / c`` in canonical form.

    Canonical form: ``c > 0``, ``gcd(a, b, c) = 1``, ``d`` squarefree, and
    ``d = 1`` whenever ``b = 0`` (so rationals have a unique representation).
    Two QuadIrr compare equal iff their canonical tuples agree.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int, b: int = 0, c: int = 1, d: int = 1):
        try:
            a, b, c, d = (operator.index(v) for v in (a, b, c, d))
        except TypeError:
            raise InputError("QuadIrr components must be integers") from None
        if c == 0:
            raise ZeroDenominator("QuadIrr with c = 0")
        if d < 1:
            raise InputError(f"QuadIrr radicand must be positive, got {d}")
        f, s = _square_split(d)
        b *= f
        d = s
        if d == 1:
            a, b = a + b, 0
        if b == 0:
            d = 1
        if c < 0:
            a, b, c = -a, -b, -c
        g = math.gcd(math.gcd(a, b), c)
        if g > 1:
            a, b, c = a // g, b // g, c // g
        self.a, self.b, self.c, self.d = a, b, c, d

    # construction -----------------------------------------------------
    @classmethod
    def from_fraction(cls, x: Fraction | int) -> "QuadIrr":
        x = Fraction(x)
        return cls(x.numerator, 0, x.denominator, 1)

    @classmethod
    def sqrt(cls, d: int) -> "QuadIrr":
        return cls(0, 1, 1, d)

    @staticmethod
    def coerce(x) -> "QuadIrr":
        if isinstance(x, QuadIrr):
            return x
        fx = _as_fraction(x)
        if fx is None:
            raise TypeError(f"cannot coerce {type(x).__name__} to QuadIrr")
        return QuadIrr.from_fraction(fx)

    # predicates ---------------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b:
            raise InputError(f"{self} is irrational")
        return Fraction(self.a, self.c)

    def key(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def _field(self, other: "QuadIrr") -> int:
        if self.b and other.b and self.d != other.d:
            raise InputError(f"mixed quadratic fields Q(sqrt {self.d}) and Q(sqrt {other.d})")
        return self.d if self.b else other.d

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        try:
            o = QuadIrr.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._field(o)
        return QuadIrr(self.a * o.c + o.a * self.c, self.b * o.c + o.b * self.c, self.c * o.c, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadIrr(-self.a, -self.b, self.c, self.d)

    def __sub__(self, other):
        try:
            o = QuadIrr.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        try:
            o = QuadIrr.coerce(other)
        except TypeError:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        try:
            o = QuadIrr.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._field(o)
        return QuadIrr(
            self.a * o.a + self.b * o.b * d,
            self.a * o.b + self.b * o.a,
            self.c * o.c,
            d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadIrr":
        """Galois conjugate ``(a - b*sqrt(d))/c``."""
        return QuadIrr(self.a, -self.b, self.c, self.d)

    def norm(self) -> Fraction:
        return Fraction(self.a * self.a - self.b * self.b * self.d, self.c * self.c)

    def inverse(self) -> "QuadIrr":
        n = self.a * self.a - self.b * self.b * self.d
        if n == 0:
            raise ZeroDenominator("inverse of zero")
        return QuadIrr(self.c * self.a, -self.c * self.b, n, self.d)

    def __truediv__(self, other):
        try:
            o = QuadIrr.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        try:
            o = QuadIrr.coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        base = self if e >= 0 else self.inverse()
        result = QuadIrr(1)
        n = abs(e)
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def scale2(self, s: int) -> "QuadIrr":
        """Exact multiplication by 2**s."""
        if s >= 0:
            return QuadIrr(self.a << s, self.b << s, self.c, self.d)
        return QuadIrr(self.a, self.b, self.c << (-s), self.d)

    # order ------------------------------------------------------------
    def sign(self) -> int:
        """Exact sign of ``a + b*sqrt(d)`` decided in integers."""
        a, b = self.a, self.b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        return sa if a * a > b * b * self.d else sb

    def floor(self) -> int:
        if self.b == 0:
            return self.a // self.c
        r = math.isqrt(self.b * self.b * self.d)
        fl = r if self.b > 0 else -r - 1
        return (self.a + fl) // self.c

    def _cmp(self, other) -> int:
        return (self - QuadIrr.coerce(other)).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, QuadIrr):
            return self.key() == other.key()
        fx = _as_fraction(other)
        if fx is not None:
            return self.b == 0 and Fraction(self.a, self.c) == fx
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(Fraction(self.a, self.c))
        return hash(self.key())

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __float__(self):
        with context(128):
            return float(to_mpfr(self, 128))

    def __repr__(self):
        return f"QuadIrr({self.a}, {self.b}, {self.c}, {self.d})"

    def __str__(self):
        if self.b == 0:
            return str(Fraction(self.a, self.c))
        return f"({self.a}{self.b:+d}*sqrt({self.d}))/{self.c}"

    def text(self) -> str:
        """CLI text form ``quad:a:b:c:d``."""
        return f"quad:{self.a}:{self.b}:{self.c}:{self.d}"


def _floor_log2(x: QuadIrr) -> int:
    """Exact floor(log2 |x|) for nonzero x."""
    ax = abs(x)
    if ax.b == 0:
        num, den = ax.a, ax.c
        e = num.bit_length() - den.bit_length()
    else:
        # estimate without cancellation: a + b*sqrt(d) = (a^2 - b^2 d)/(a - b*sqrt(d))
        with context(96):
            sq = gmpy2.sqrt(mpfr(ax.d))
            top = mpfr(ax.a) + mpfr(ax.b) * sq
            if ax.a * ax.b < 0:
                top = mpfr(ax.a * ax.a - ax.b * ax.b * ax.d) / (mpfr(ax.a) - mpfr(ax.b) * sq)
            est = top / mpfr(ax.c)
            e = int(gmpy2.floor(gmpy2.log2(est)))
    while ax < QuadIrr(1).scale2(e):
        e -= 1
    while ax >= QuadIrr(1).scale2(e + 1):
        e += 1
    return e


def to_mpfr(x: QuadIrr | Fraction | int, prec: int) -> mpfr:
    """Round an exact real to the nearest ``prec``-bit binary float."""
    fx = _as_fraction(x)
    if fx is None and isinstance(x, QuadIrr) and x.is_rational:
        fx = x.to_fraction()
    if fx is not None:
        with context(prec):
            return mpfr(gmpy2.mpq(fx.numerator, fx.denominator))
    if not isinstance(x, QuadIrr):
        raise TypeError(f"cannot round {type(x).__name__}")
    e = _floor_log2(x)
    s = prec - 1 - e
    # x irrational: x * 2**s is never a half-integer, so floor(y + 1/2) is round-to-nearest
    mant = (x.scale2(s) + Fraction(1, 2)).floor()
    with context(prec):
        return gmpy2.mul_2exp(mpfr(mant), -s)


# ---------------------------------------------------------------------------
# Gaussian rationals and quadratic-field complex numbers


class GaussianRational:
    """``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def coerce(x) -> "GaussianRational | None":
        if isinstance(x, GaussianRational):
            return x
        fx = _as_fraction(x)
        if fx is not None:
            return GaussianRational(fx, 0)
        if isinstance(x, QuadIrr) and x.is_rational:
            return GaussianRational(x.to_fraction(), 0)
        return None

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = GaussianRational.coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = GaussianRational.coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise ZeroDenominator("inverse of zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = GaussianRational.coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0 and self.is_zero():
            raise ZeroToNegativePower("0 ** negative")
        return _exact_pow(self if e >= 0 else self.inverse(), abs(e), GaussianRational(1))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, QuadComplex):
            return other == self
        o = GaussianRational.coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"


class QuadComplex:
    """``re + im*i`` with ``re``, ``im`` in a common field ``Q(sqrt d)``."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = QuadIrr.coerce(re)
        self.im = QuadIrr.coerce(im)
        self.re._field(self.im)

    @staticmethod
    def coerce(x) -> "QuadComplex | None":
        if isinstance(x, QuadComplex):
            return x
        if isinstance(x, GaussianRational):
            return QuadComplex(x.re, x.im)
        if isinstance(x, QuadIrr):
            return QuadComplex(x, 0)
        fx = _as_fraction(x)
        if fx is not None:
            return QuadComplex(fx, 0)
        return None

    @property
    def d(self) -> int:
        return self.re.d if self.re.b else self.im.d

    def __add__(self, other):
        o = QuadComplex.coerce(other)
        if o is None:
            return NotImplemented
        return QuadComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QuadComplex(-self.re, -self.im)

    def __sub__(self, other):
        o = QuadComplex.coerce(other)
        if o is None:
            return NotImplemented
        return QuadComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = QuadComplex.coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = QuadComplex.coerce(other)
        if o is None:
            return NotImplemented
        return QuadComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def norm(self) -> QuadIrr:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "QuadComplex":
        return QuadComplex(self.re, -self.im)

    def inverse(self) -> "QuadComplex":
        n = self.norm()
        if not n:
            raise ZeroDenominator("inverse of zero")
        ninv = n.inverse()
        return QuadComplex(self.re * ninv, -self.im * ninv)

    def __truediv__(self, other):
        o = QuadComplex.coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = QuadComplex.coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0 and self.is_zero():
            raise ZeroToNegativePower("0 ** negative")
        return _exact_pow(self if e >= 0 else self.inverse(), abs(e), QuadComplex(1))

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        o = QuadComplex.coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.re.is_rational and self.im.is_rational:
            return hash(GaussianRational(self.re.to_fraction(), self.im.to_fraction()))
        return hash((self.re, self.im))

    def __repr__(self):
        return f"QuadComplex({self.re!r}, {self.im!r})"

    def __str__(self):
        return f"{self.re} + {self.im}*i"


ExactComplex = Union[GaussianRational, QuadComplex]
ExactValue = Union[Fraction, int, QuadIrr, GaussianRational, QuadComplex]


def _exact_pow(base, n: int, one):
    result = one
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def exact_complex(re, im=0) -> ExactComplex:
    """Smallest exact complex type holding ``re + im*i``."""
    re = QuadIrr.coerce(re) if not isinstance(re, QuadIrr) else re
    im = QuadIrr.coerce(im) if not isinstance(im, QuadIrr) else im
    if re.is_rational and im.is_rational:
        return GaussianRational(re.to_fraction(), im.to_fraction())
    return QuadComplex(re, im)


def exact_parts(x) -> tuple[QuadIrr, QuadIrr]:
    if isinstance(x, (GaussianRational, QuadComplex)):
        return QuadIrr.coerce(x.re), QuadIrr.coerce(x.im)
    return QuadIrr.coerce(x), QuadIrr(0)


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, QuadIrr, GaussianRational, QuadComplex)) and not isinstance(x, bool)


# ---------------------------------------------------------------------------
# BigComplex


class BigComplex:
    """Complex binary floating value at a fixed precision ``prec`` (bits)."""

    __slots__ = ("value", "prec", "ulp_error")

    def __init__(self, value, prec: int, ulp_error: int = 0):
        if prec < 2:
            raise InputError(f"precision must be >= 2 bits, got {prec}")
        if not isinstance(value, type(mpc(0))) or value.precision != (prec, prec):
            with context(prec):
                value = mpc(value)
        self.value = value
        self.prec = prec
        self.ulp_error = ulp_error

    @classmethod
    def zero(cls, prec: int) -> "BigComplex":
        return cls(0, prec)

    @classmethod
    def from_parts(cls, re, im, prec: int) -> "BigComplex":
        with context(prec):
            return cls(mpc(mpfr(re), mpfr(im)), prec)

    @property
    def real(self) -> mpfr:
        return self.value.real

    @property
    def imag(self) -> mpfr:
        return self.value.imag

    def _other(self, other):
        if isinstance(other, BigComplex):
            if other.prec != self.prec:
                raise PrecisionMismatch(f"precision {self.prec} vs {other.prec}")
            return other.value
        if is_exact(other):
            return embed_exact(other, self.prec).value
        if isinstance(other, (float, complex)) or isinstance(other, (type(mpfr(0)), type(mpc(0)))):
            return other
        return None

    def _wrap(self, fn, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        with context(self.prec):
            return BigComplex(fn(self.value, o), self.prec)

    def __add__(self, other):
        return self._wrap(lambda x, y: x + y, other)

    def __radd__(self, other):
        return self._wrap(lambda x, y: y + x, other)

    def __sub__(self, other):
        return self._wrap(lambda x, y: x - y, other)

    def __rsub__(self, other):
        return self._wrap(lambda x, y: y - x, other)

    def __mul__(self, other):
        return self._wrap(lambda x, y: x * y, other)

    def __rmul__(self, other):
        return self._wrap(lambda x, y: y * x, other)

    def __truediv__(self, other):
        return self._wrap(lambda x, y: x / y, other)

    def __rtruediv__(self, other):
        return self._wrap(lambda x, y: y / x, other)

    def __neg__(self):
        return BigComplex(-self.value, self.prec)

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        return pow_int(self, e)

    def __abs__(self) -> mpfr:
        with context(self.prec):
            return abs(self.value)

    def conjugate(self) -> "BigComplex":
        return BigComplex(self.value.conjugate(), self.prec)

    def is_zero(self) -> bool:
        return bool(gmpy2.is_zero(self.value))

    def round_to(self, prec: int) -> "BigComplex":
        with context(prec):
            return BigComplex(mpc(self.value), prec)

    def bits(self) -> bytes:
        return gmpy2.to_binary(self.value)

    def __complex__(self):
        return complex(float(self.value.real), float(self.value.imag))

    def __eq__(self, other):
        if isinstance(other, BigComplex):
            return self.prec == other.prec and self.bits() == other.bits()
        if isinstance(other, (int, float, complex)):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.prec, self.bits()))

    def __repr__(self):
        return f"BigComplex({format_real(self.real, self.prec)}, {format_real(self.imag, self.prec)}, prec={self.prec})"


def decimal_digits(prec: int) -> int:
    """Significant decimal digits needed to round-trip ``prec`` bits."""
    return math.ceil(prec * math.log10(2)) + 1


def format_real(x, prec: int) -> str:
    """Fixed-width scientific rendering of an mpfr at ``decimal_digits(prec)``."""
    x = mpfr(x) if not isinstance(x, type(mpfr(0))) else x
    if gmpy2.is_nan(x):
        return "nan"
    if gmpy2.is_infinite(x):
        return "inf" if x > 0 else "-inf"
    if gmpy2.is_zero(x):
        return "0"
    ndig = decimal_digits(prec)
    mant, exp, _ = x.digits(10, ndig)
    sign = ""
    if mant.startswith("-"):
        sign, mant = "-", mant[1:]
    return f"{sign}{mant[0]}.{mant[1:]}e{exp - 1:+d}"


def embed_exact(x: ExactValue, prec: int) -> BigComplex:
    """Correctly rounded image of an exact value, each component separately."""
    if prec < MIN_PRECISION:
        raise InputError(f"precision must be >= {MIN_PRECISION} bits, got {prec}")
    if isinstance(x, (GaussianRational, QuadComplex)):
        re, im = x.re, x.im
    else:
        re, im = x, 0
    r = to_mpfr(re, prec)
    i = to_mpfr(im, prec)
    with context(prec):
        return BigComplex(mpc(r, i), prec)


def to_big(x, prec: int) -> BigComplex:
    """Exact values are embedded, BigComplex values re-rounded to ``prec``."""
    if isinstance(x, BigComplex):
        return x if x.prec == prec else x.round_to(prec)
    if is_exact(x):
        return embed_exact(x, prec)
    with context(prec):
        return BigComplex(mpc(x), prec)


def pow_raw(x, n: int):
    """Binary exponentiation ``x**n`` (n >= 0) in the active gmpy2 context."""
    result = None
    while n:
        if n & 1:
            result = x if result is None else result * x
        n >>= 1
        if n:
            x = x * x
    return mpc(1) if result is None else result


def pow_int(z: BigComplex, e: int) -> BigComplex:
    """``z**e`` by binary exponentiation; ``ulp_error`` records 2|e|+2."""
    if e < 0 and z.is_zero():
        raise ZeroToNegativePower("zero raised to a negative power")
    with context(z.prec):
        base = 1 / z.value if e < 0 else z.value
        out = pow_raw(base, abs(e))
    return BigComplex(out, z.prec, ulp_error=2 * abs(e) + 2)


def chunked_sum(raw_terms: Iterable, prec: int, chunk_size: int = CHUNK_SIZE):
    """Left-to-right sums inside fixed chunks, then chunks left to right."""
    return combine_chunks(chunk_sums(raw_terms, prec, chunk_size), prec)


def chunk_sums(raw_terms: Iterable, prec: int, chunk_size: int = CHUNK_SIZE) -> list:
    out = []
    with context(prec):
        acc = mpc(0)
        n = 0
        for t in raw_terms:
            acc = acc + t
            n += 1
            if n == chunk_size:
                out.append(acc)
                acc = mpc(0)
                n = 0
        if n:
            out.append(acc)
    return out


def combine_chunks(chunks: Sequence, prec: int):
    with context(prec):
        total = mpc(0)
        for c in chunks:
            total = total + c
    return total


def sum_fixed_order(terms: Sequence[BigComplex], prec: int | None = None) -> BigComplex:
    """Deterministic sum of BigComplex terms sharing one precision."""
    if not terms:
        return BigComplex.zero(prec or MIN_PRECISION)
    p = terms[0].prec
    for t in terms:
        if t.prec != p:
            raise PrecisionMismatch(f"terms at precision {p} and {t.prec}")
    if prec is not None and prec != p:
        raise PrecisionMismatch(f"requested precision {prec}, terms at {p}")
    return BigComplex(chunked_sum((t.value for t in terms), p), p)


# ---------------------------------------------------------------------------
# midpoint-radius complex balls for error propagation


class Ball:
    """Complex disc ``|x - mid| <= rad`` with radius arithmetic rounded up."""

    __slots__ = ("mid", "rad")

    def __init__(self, mid: BigComplex, rad=0):
        self.mid = mid
        with context(64, gmpy2.RoundUp):
            self.rad = mpfr(rad)

    @property
    def prec(self) -> int:
        return self.mid.prec

    def _ulp(self, x: BigComplex):
        with context(64, gmpy2.RoundUp):
            return mpfr(abs(x.value)) * gmpy2.exp2(1 - x.prec)

    def __add__(self, other: "Ball") -> "Ball":
        m = self.mid + other.mid
        with context(64, gmpy2.RoundUp):
            r = self.rad + other.rad + self._ulp(m)
        return Ball(m, r)

    def __sub__(self, other: "Ball") -> "Ball":
        m = self.mid - other.mid
        with context(64, gmpy2.RoundUp):
            r = self.rad + other.rad + self._ulp(m)
        return Ball(m, r)

    def __mul__(self, other: "Ball") -> "Ball":
        m = self.mid * other.mid
        with context(64, gmpy2.RoundUp):
            a = mpfr(abs(self.mid.value))
            b = mpfr(abs(other.mid.value))
            r = a * other.rad + b * self.rad + self.rad * other.rad + self._ulp(m)
        return Ball(m, r)

    def scale(self, c: int) -> "Ball":
        m = self.mid * c
        with context(64, gmpy2.RoundUp):
            r = self.rad * abs(c) + self._ulp(m)
        return Ball(m, r)

    def inverse(self) -> "Ball":
        with context(64, gmpy2.RoundDown):
            a = mpfr(abs(self.mid.value))
        if a <= self.rad:
            raise ZeroDenominator("ball contains zero")
        m = 1 / self.mid
        with context(64, gmpy2.RoundUp):
            r = self.rad / (a * (a - self.rad)) + self._ulp(m)
        return Ball(m, r)

    def __truediv__(self, other: "Ball") -> "Ball":
        return self * other.inverse()

    def contains_zero(self) -> bool:
        return mpfr(abs(self.mid.value)) <= self.rad

    def __repr__(self):
        return f"Ball({self.mid!r}, rad={float(self.rad):.3e})"
