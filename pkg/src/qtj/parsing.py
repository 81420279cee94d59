"""Text forms of CLI inputs: reals, slopes, moduli, sets, matrices, stages."""

from __future__ import annotations

import re
from fractions import Fraction

from gmpy2 import mpfr

from .errors import InputError
from .foliation import GL2Z, Modulus
from .numerics import GaussianRational, QuadComplex, QuadIrr, context
from .schemes import Box, Explicit, QuantumWindow, SetDescriptor, Transformed, Translated

_RATIONAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Integer, p/q or decimal literal, read exactly."""
    t = text.strip()
    if not _RATIONAL.match(t):
        raise InputError(f"not a rational literal: {text!r}")
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {text!r}: {exc}") from None


def _ints(parts, n: int, what: str) -> list[int]:
    if len(parts) != n:
        raise InputError(f"{what} needs {n} integers, got {len(parts)}")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise InputError(f"{what} needs integers, got {parts}") from None


def parse_quad(body: str) -> QuadIrr:
    a, b, c, d = _ints(body.split(":"), 4, "quad")
    if c == 0:
        raise InputError("quad denominator must be nonzero")
    if d <= 0:
        raise InputError("quad radicand must be positive")
    return QuadIrr(a, b, c, d)


def parse_theta(text: str, prec: int = 128):
    """quad:a:b:c:d, rat:p:q, or a decimal (returned as a heuristic mpfr)."""
    t = text.strip()
    if t.startswith("quad:"):
        return parse_quad(t[5:])
    if t.startswith("rat:"):
        p, q = _ints(t[4:].split(":"), 2, "rat")
        if q == 0:
            raise InputError("rat denominator must be nonzero")
        return Fraction(p, q)
    if _RATIONAL.match(t) and "/" not in t:
        with context(prec):
            return mpfr(t)
    raise InputError(f"unrecognised theta {text!r}; use quad:a:b:c:d, rat:p:q or a decimal")


def _split_complex(t: str) -> tuple[str, str]:
    """Split 'x+yi' into ('x', '+y'); the imaginary part keeps its sign."""
    if not t.endswith("i"):
        return t, ""
    body = t[:-1].rstrip("*")
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            return body[:k], body[k:]
    return "", body


def parse_complex(text: str):
    """Exact complex: 'i', '2i', '1/2+i', '0.3-1.5i', or gauss:a:b:c:d,a:b:c:d."""
    t = text.strip().replace(" ", "")
    if t.startswith("gauss:"):
        comps = t[6:].split(",")
        if len(comps) != 2:
            raise InputError("gauss needs two quad components separated by a comma")
        re_, im_ = (parse_quad(c) for c in comps)
        return QuadComplex(re_, im_)
    if not t:
        raise InputError("empty complex literal")
    re_text, im_text = _split_complex(t)
    re_part = parse_rational(re_text) if re_text else Fraction(0)
    im_part = Fraction(0)
    if t.endswith("i"):
        if im_text in ("", "+"):
            im_part = Fraction(1)
        elif im_text == "-":
            im_part = Fraction(-1)
        else:
            im_part = parse_rational(im_text)
    return GaussianRational(re_part, im_part)


def parse_modulus(text: str) -> Modulus:
    return Modulus(parse_complex(text))


def parse_z(text: str):
    """('point', value) or ('slope', t) for the 't=<real>' form."""
    t = text.strip()
    if t.startswith("t="):
        return "slope", parse_rational(t[2:])
    return "point", parse_complex(t)


def parse_matrix(text: str) -> GL2Z:
    a, b, c, d = _ints(text.replace("[", "").replace("]", "").split(","), 4, "matrix")
    return GL2Z(a, b, c, d)


_PREFIX = re.compile(r"^(T|shift)\[([^\]]*)\]:(.*)$")


def parse_set(text: str, theta=None) -> SetDescriptor:
    """box:N, box0:N, qwin:s:L, explicit:m,n;..., with T[...]: / shift[...]: prefixes."""
    t = text.strip()
    m = _PREFIX.match(t)
    if m:
        kind, args, rest = m.groups()
        inner = parse_set(rest, theta)
        if kind == "T":
            return Transformed(parse_matrix(args), inner)
        m0, n0 = _ints(args.split(","), 2, "shift")
        return Translated((m0, n0), inner)
    head, _, body = t.partition(":")
    if head in ("box", "box0"):
        (N,) = _ints([body], 1, head)
        return Box(N, include_origin=head == "box")
    if head == "qwin":
        s, L = _ints(body.split(":"), 2, "qwin")
        if not isinstance(theta, QuadIrr):
            raise InputError("qwin sets need an irrational --theta given as quad:a:b:c:d")
        return QuantumWindow(theta, s, L)
    if head == "explicit":
        pairs = []
        for item in filter(None, body.split(";")):
            pairs.append(tuple(_ints(item.split(","), 2, "explicit pair")))
        return Explicit(pairs)
    raise InputError(f"unrecognised set {text!r}")


def parse_stages(text: str) -> tuple[int, ...]:
    """'lo..hi' (inclusive) or a comma list."""
    t = text.strip()
    if ".." in t:
        lo, hi = _ints(t.split(".."), 2, "stage range")
        if hi < lo:
            raise InputError(f"empty stage range {text!r}")
        return tuple(range(lo, hi + 1))
    return tuple(_ints(t.split(","), len(t.split(",")), "stage list"))


def parse_int_list(text: str) -> tuple[int, ...]:
    parts = text.split(",")
    return tuple(_ints(parts, len(parts), "integer list"))
